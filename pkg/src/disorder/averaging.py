"""
Детерминированное усреднение по реализациям беспорядка (Монте-Карло)

Реализации раздаются воркерам непрерывными блоками индексов, собираются
обратно в каноническом порядке и суммируются попарным деревом, поэтому
результат побитно не зависит от числа воркеров.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional

import numpy as np

from config import Config
from src.core.validation import require, validator
from src.disorder.models import MonteCarloEstimate, RealizationSeed
from src.utils.exceptions import EstimatorError, LabException

logger = logging.getLogger(__name__)

Estimator = Callable[[np.random.Generator], object]


def pairwise_sum(values: np.ndarray) -> np.ndarray:
    """Сумма вдоль оси 0 фиксированным попарным деревом"""
    arr = np.asarray(values, dtype=float)
    if arr.shape[0] == 0:
        return np.zeros(arr.shape[1:])
    while arr.shape[0] > 1:
        if arr.shape[0] % 2 == 1:
            arr = np.concatenate([arr, np.zeros((1,) + arr.shape[1:])], axis=0)
        arr = arr[0::2] + arr[1::2]
    return arr[0]


def _run_block(estimator: Estimator, seed: RealizationSeed, start: int, stop: int) -> np.ndarray:
    results = []
    for index in range(start, stop):
        try:
            value = estimator(seed.generator(index))
        except LabException as e:
            raise EstimatorError(
                f"Оценщик упал на реализации {index}: {e}",
                realization_index=index,
                details=e.details,
            )
        except Exception as e:
            raise EstimatorError(f"Оценщик упал на реализации {index}: {e}", realization_index=index)
        results.append(np.asarray(value, dtype=float))
    return np.stack(results) if results else np.empty((0,))


def evaluate_realizations(
    estimator: Estimator,
    n_samples: int,
    seed: RealizationSeed,
    n_workers: Optional[int] = None,
) -> np.ndarray:
    """Значения оценщика по реализациям 0..n_samples−1 в каноническом порядке"""
    workers = max(1, int(n_workers if n_workers is not None else Config.DEFAULT_WORKERS))
    workers = min(workers, n_samples)
    if workers == 1:
        return _run_block(estimator, seed, 0, n_samples)

    bounds = np.linspace(0, n_samples, workers + 1).astype(int)
    logger.debug(f"Распределяем {n_samples} реализаций по {workers} воркерам")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_block, estimator, seed, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        blocks: List[np.ndarray] = [future.result() for future in futures]
    return np.concatenate(blocks, axis=0)


def summarize(values: np.ndarray, keep_samples: bool = False) -> MonteCarloEstimate:
    """Среднее и стандартная ошибка с попарной редукцией"""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    mean = pairwise_sum(values) / n
    if n > 1:
        variance = pairwise_sum((values - mean) ** 2) / (n - 1)
        std_error = np.sqrt(variance / n)
    else:
        std_error = np.zeros_like(mean)
    if mean.ndim == 0:
        mean, std_error = float(mean), float(std_error)
    return MonteCarloEstimate(mean, std_error, n, values if keep_samples else None)


def average(
    estimator: Estimator,
    n_samples: int,
    seed: RealizationSeed,
    n_workers: Optional[int] = None,
    keep_samples: bool = False,
) -> MonteCarloEstimate:
    """
    Av(·): среднее оценщика по независимым реализациям

    Args:
        estimator: Вызываемый объект rng -> число или массив (должен сериализоваться pickle)
        n_samples: Число реализаций (>= 2)
        seed: Базовое зерно; реализация i получает поток seed.generator(i)
        n_workers: Число процессов (по умолчанию из конфигурации)
    """
    n_samples = require(validator.validate_integer_at_least("n_samples", n_samples, 2))
    values = evaluate_realizations(estimator, n_samples, seed, n_workers)
    estimate = summarize(values, keep_samples)
    logger.debug(f"Av по {n_samples} реализациям: mean={estimate.mean}")
    return estimate
