"""
Популяционная динамика для полостной рекурсии на дереве Бете

g_x = 1/(λV_x − ζ − Σ_{K детей} g_child): популяция из P значений
обновляется синхронно по поколениям, дети выбираются из предыдущего
поколения с возвращением.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from config import Config
from src.bethe.models import (
    BetheModelSpec,
    NegativeMomentProbe,
    RootGreenStats,
    TreeGreenEnsemble,
)
from src.core.validation import require, validator
from src.disorder import RealizationSeed, draw
from src.utils.exceptions import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

MIN_POOL_SIZE = 1000
MIN_BURN_IN = 50
# Допуск критерия Коши на среднее популяции (сверх разброса по поколениям)
CAUCHY_SLACK = 1e-4


def free_cavity_green(K: int, zeta):
    """
    Корень K·g² + ζ·g + 1 = 0 на ветви Герглотца; для вещественного ζ вне
    зоны берется затухающий корень |g| ≤ 1/√K
    """
    zeta = np.asarray(zeta, dtype=complex)
    root = np.sqrt(zeta**2 - 4 * K)
    first = (-zeta + root) / (2 * K)
    second = (-zeta - root) / (2 * K)
    by_imag = first.imag > second.imag + 1e-15
    by_abs = (np.abs(first.imag - second.imag) <= 1e-15) & (np.abs(first) <= np.abs(second))
    result = np.where(by_imag | by_abs, first, second)
    return complex(result) if result.ndim == 0 else result


def free_root_green(K: int, zeta, root_degree: Optional[int] = None):
    """G(0,0;ζ) свободного дерева с root_degree поддеревьями в корне (по умолчанию K+1)"""
    degree = K + 1 if root_degree is None else root_degree
    return 1.0 / (-np.asarray(zeta, dtype=complex) - degree * free_cavity_green(K, zeta))


def default_seed(seed: Optional[RealizationSeed]) -> RealizationSeed:
    return seed if seed is not None else RealizationSeed(Config.DEFAULT_MASTER_SEED)


def _resampled_sum(pool: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Σ count независимо выбранных членов каждой строки популяции (M, P)"""
    rows, size = pool.shape
    if count == 0:
        return np.zeros_like(pool)
    index = rng.integers(0, size, size=(rows, size * count))
    picked = np.take_along_axis(pool, index, axis=1)
    return picked.reshape(rows, size, count).sum(axis=2)


def _cavity_update(
    spec: BetheModelSpec,
    pool: np.ndarray,
    zetas: np.ndarray,
    children: int,
    rng: np.random.Generator,
) -> np.ndarray:
    potential = spec.lam * draw(spec.disorder, rng, pool.shape)
    return 1.0 / (potential - zetas[:, None] - _resampled_sum(pool, children, rng))


def _check_herglotz(values: np.ndarray, generation: int) -> None:
    if np.any(values.imag <= 0):
        raise ConvergenceError(
            "Нарушено свойство Герглотца: Im g ≤ 0",
            details={"generation": generation, "count": int(np.sum(values.imag <= 0))},
        )


def green_recursion_step(
    ensemble: TreeGreenEnsemble,
    spec: BetheModelSpec,
    seed: Optional[RealizationSeed] = None,
) -> TreeGreenEnsemble:
    """
    Одно поколение рекурсии: каждое новое значение строится из K
    независимо выбранных членов популяции и свежего значения потенциала
    """
    rng = default_seed(seed).generator(ensemble.generation)
    pool = ensemble.pool[None, :]
    updated = _cavity_update(spec, pool, np.array([ensemble.zeta]), spec.K, rng)[0]
    _check_herglotz(updated, ensemble.generation + 1)
    return TreeGreenEnsemble(updated, ensemble.zeta, ensemble.generation + 1)


def run_population(
    spec: BetheModelSpec,
    zetas,
    pool_size: Optional[int] = None,
    burn_in: Optional[int] = None,
    readout: Optional[int] = None,
    seed: Optional[RealizationSeed] = None,
    root_degree: Optional[int] = None,
) -> Tuple[np.ndarray, int, Optional[np.ndarray]]:
    """
    Популяции для набора ζ с прогревом и проверкой стабилизации среднего

    Среднее популяции по поколениям окна считывания сравнивается между
    первой и второй половиной окна; при расхождении больше разброса окно
    продлевается вплоть до Config.BETHE_MAX_GENERATIONS.

    Returns:
        (популяции (M, P), число поколений, выборка корня (M, readout·P)
        если задана root_degree)
    """
    zetas = np.atleast_1d(np.asarray(zetas, dtype=complex))
    if np.any(zetas.imag <= 0):
        raise DomainError("Требуется Im ζ > 0 для всех точек")
    pool_size = require(
        validator.validate_integer_at_least(
            "pool_size", Config.BETHE_POOL_SIZE if pool_size is None else pool_size, MIN_POOL_SIZE
        )
    )
    burn_in = require(
        validator.validate_integer_at_least(
            "generations", Config.BETHE_BURN_IN if burn_in is None else burn_in, MIN_BURN_IN
        )
    )
    readout = require(
        validator.validate_integer_at_least(
            "readout", Config.BETHE_READOUT if readout is None else readout, 2
        )
    )
    rng = default_seed(seed).generator(len(zetas), pool_size)

    pool = np.repeat(free_cavity_green(spec.K, zetas).reshape(-1, 1), pool_size, axis=1)
    generation = 0
    for _ in range(burn_in):
        pool = _cavity_update(spec, pool, zetas, spec.K, rng)
        generation += 1
    _check_herglotz(pool, generation)

    while True:
        means = np.empty((readout, zetas.size), dtype=complex)
        roots = []
        for step in range(readout):
            pool = _cavity_update(spec, pool, zetas, spec.K, rng)
            generation += 1
            _check_herglotz(pool, generation)
            means[step] = pool.mean(axis=1)
            if root_degree is not None:
                roots.append(_cavity_update(spec, pool, zetas, root_degree, rng))

        half = readout // 2
        drift = np.abs(means[:half].mean(axis=0) - means[half:].mean(axis=0))
        spread = means.std(axis=0)
        tolerance = spread + CAUCHY_SLACK * (1.0 + np.abs(means.mean(axis=0)))
        if np.all(drift <= tolerance):
            break
        if generation + readout > Config.BETHE_MAX_GENERATIONS:
            worst = int(np.argmax(drift - tolerance))
            raise ConvergenceError(
                f"Популяция не стабилизировалась за {generation} поколений",
                details={
                    "zeta": str(zetas[worst]),
                    "drift": float(drift[worst]),
                    "spread": float(spread[worst]),
                    "generations": generation,
                },
            )
        logger.debug(f"Среднее популяции дрейфует, продлеваем окно (поколение {generation})")

    root_samples = np.concatenate(roots, axis=1) if roots else None
    return pool, generation, root_samples


def root_green(
    spec: BetheModelSpec,
    zeta: complex,
    pool_size: Optional[int] = None,
    generations: Optional[int] = None,
    seed: Optional[RealizationSeed] = None,
    root_degree: Optional[int] = None,
    threshold: Optional[float] = None,
) -> RootGreenStats:
    """
    Распределение G(0,0;ζ): корень собирает root_degree поддеревьев
    (по умолчанию K+1; K для корневого дерева)

    Плотность а.н. спектра оценивается как π^{−1}·median Im G, доля
    положительности считается относительно порога (по умолчанию 10·Im ζ).
    """
    zeta = complex(zeta)
    degree = spec.K + 1 if root_degree is None else root_degree
    require(validator.validate_integer_at_least("root_degree", degree, 1))
    _, generation, samples = run_population(
        spec, [zeta], pool_size, generations, seed=seed, root_degree=degree
    )
    samples = samples[0]
    threshold = 10.0 * zeta.imag if threshold is None else float(threshold)
    imag = samples.imag
    stats = RootGreenStats(
        zeta=zeta,
        samples=samples,
        root_degree=degree,
        generations=generation,
        threshold=threshold,
        im_positive_fraction=float(np.mean(imag > threshold)),
        density=float(np.median(imag) / math.pi),
        mean_density=float(np.mean(imag) / math.pi),
    )
    logger.info(
        f"G(0,0) при K={spec.K}, λ={spec.lam}, ζ={zeta}: плотность {stats.density:.5f}, "
        f"доля Im G > {threshold:g}: {stats.im_positive_fraction:.3f}"
    )
    return stats


def path_green(
    spec: BetheModelSpec,
    zeta: complex,
    pool: np.ndarray,
    depth: int,
    n_paths: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    log|G(0,x;ζ)| вдоль путей корневого дерева для |x| = 0..depth

    G(0,x) = Π_{j=0..|x|} g_j, где g_j полостная функция вершины пути;
    цепочка строится снизу вверх, остальные K−1 детей берутся из популяции.

    Returns:
        Массив (n_paths, depth + 1)
    """
    pool = np.asarray(pool, dtype=complex).ravel()
    zeta = complex(zeta)
    chain = np.empty((depth + 1, n_paths), dtype=complex)
    chain[depth] = pool[rng.integers(0, pool.size, size=n_paths)]
    for level in range(depth - 1, -1, -1):
        potential = spec.lam * draw(spec.disorder, rng, n_paths)
        siblings = pool[rng.integers(0, pool.size, size=(n_paths, spec.K - 1))].sum(axis=1)
        chain[level] = 1.0 / (potential - zeta - chain[level + 1] - siblings)
    return np.cumsum(np.log(np.abs(chain)), axis=0).T


def negative_moment_probe(
    spec: BetheModelSpec,
    energy: float,
    eta: float = 1e-3,
    delta: float = 0.5,
    pool_size: Optional[int] = None,
    generations: Optional[int] = None,
    seed: Optional[RealizationSeed] = None,
    tolerance: float = 0.25,
) -> NegativeMomentProbe:
    """
    Эмпирическое Av((Im G)^{−3−δ}) при P и 2P: конечность и устойчивость
    к удвоению популяции
    """
    require(validator.validate_positive("eta", eta))
    require(validator.validate_positive("delta", delta))
    seed = default_seed(seed)
    size = Config.BETHE_POOL_SIZE if pool_size is None else int(pool_size)
    values = []
    for index, current in enumerate((size, 2 * size)):
        stats = root_green(
            spec, complex(energy, eta), current, generations, seed=seed.child(index)
        )
        values.append(float(np.mean(stats.samples.imag ** (-(3.0 + delta)))))
    change = abs(values[1] - values[0]) / max(abs(values[0]), 1e-300)
    stable = bool(all(math.isfinite(v) for v in values) and change <= tolerance)
    logger.info(f"Отрицательный момент Im G при E={energy}: {values}, устойчив: {stable}")
    return NegativeMomentProbe(
        energy=float(energy),
        eta=float(eta),
        delta=float(delta),
        pool_sizes=(size, 2 * size),
        values=(values[0], values[1]),
        relative_change=float(change),
        stable=stable,
    )
