"""
Выборка связей и аналитические моменты законов распределения
"""

import logging
import math
from typing import Union

import numpy as np

from src.core.validation import require, validator
from src.disorder.models import (
    DistributionKind,
    DistributionSpec,
    MomentBoundReport,
    RealizationSeed,
)
from src.utils.exceptions import UnsupportedOperationError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def draw(dist: DistributionSpec, rng: np.random.Generator, size) -> np.ndarray:
    """Независимые значения закона dist из готового генератора"""
    kind = dist.kind
    if kind is DistributionKind.BERNOULLI:
        return dist.scale * (2.0 * rng.integers(0, 2, size=size) - 1.0)
    if kind is DistributionKind.UNIFORM:
        return rng.uniform(-dist.scale, dist.scale, size=size)
    if kind is DistributionKind.GAUSSIAN:
        # плотность exp(−x²/s²)/(s√π): стандартное отклонение s/√2
        return rng.normal(0.0, dist.scale / math.sqrt(2.0), size=size)
    values = np.asarray(dist.values)
    probabilities = np.asarray(dist.probabilities) if dist.probabilities else None
    return rng.choice(values, size=size, p=probabilities)


def sample_couplings(dist: DistributionSpec, count: int, seed: RealizationSeed) -> np.ndarray:
    """
    Независимые одинаково распределенные связи для одной реализации

    Args:
        dist: Закон распределения
        count: Число значений (>= 1)
        seed: Зерно реализации; результат детерминирован
    """
    count = require(validator.validate_integer_at_least("count", count, 1))
    return draw(dist, seed.generator(), count)


def analytic_mean(dist: DistributionSpec) -> float:
    if dist.kind is DistributionKind.TABULATED:
        if not dist.probabilities:
            raise UnsupportedOperationError("Эмпирический табулированный закон не имеет аналитических моментов")
        return float(np.dot(dist.probabilities, dist.values))
    return 0.0


def analytic_moment(dist: DistributionSpec, n: int) -> float:
    """Av(J^n) в замкнутой форме"""
    n = require(validator.validate_integer_at_least("n", n, 0))
    kind = dist.kind
    if kind is DistributionKind.TABULATED:
        if not dist.probabilities:
            raise UnsupportedOperationError(
                "Эмпирический табулированный закон не имеет аналитических моментов",
                details={"n": n},
            )
        return float(np.dot(dist.probabilities, np.asarray(dist.values) ** n))
    if n % 2 == 1:
        return 0.0
    s = dist.scale
    if kind is DistributionKind.BERNOULLI:
        return s**n
    if kind is DistributionKind.UNIFORM:
        return s**n / (n + 1)
    # (n−1)!!/2^{n/2} для плотности exp(−x²)/√π
    return s**n * _double_factorial(n - 1) / 2 ** (n // 2)


def _double_factorial(k: int) -> int:
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


def cosine_moment(dist: DistributionSpec, a: ArrayLike) -> ArrayLike:
    """
    χ(a) = Av(cos(aJ)), характеристическая функция симметричного закона
    """
    a = np.asarray(a, dtype=float)
    kind = dist.kind
    s = dist.scale
    if kind is DistributionKind.BERNOULLI:
        result = np.cos(a * s)
    elif kind is DistributionKind.UNIFORM:
        # np.sinc(x) = sin(πx)/(πx)
        result = np.sinc(a * s / np.pi)
    elif kind is DistributionKind.GAUSSIAN:
        result = np.exp(-((a * s) ** 2) / 4.0)
    else:
        if not dist.probabilities:
            raise UnsupportedOperationError("Эмпирический табулированный закон не имеет χ(a)")
        values = np.asarray(dist.values)
        weights = np.asarray(dist.probabilities)
        result = np.tensordot(np.cos(np.multiply.outer(a, values)), weights, axes=([-1], [0]))
    return float(result) if result.ndim == 0 else result


def check_moment_bounds(dist: DistributionSpec, n_max: int) -> MomentBoundReport:
    """
    Проверка |Av(J^n)| ≤ n!·c^n для n = 2..n_max

    Наименьшая допустимая константа равна max_n (|Av(J^n)|/n!)^{1/n};
    нарушение фиксируется, если она бесконечна или превышает объявленную.
    """
    n_max = require(validator.validate_integer_at_least("n_max", n_max, 2))
    if not dist.has_analytic_moments:
        raise UnsupportedOperationError(
            "Табулированный закон без вероятностей: моменты не определены",
            details={"kind": dist.kind.value},
        )

    orders = tuple(range(2, n_max + 1))
    moments = tuple(analytic_moment(dist, n) for n in orders)
    constants = tuple(
        (abs(m) / math.factorial(n)) ** (1.0 / n) if math.isfinite(m) else math.inf
        for n, m in zip(orders, moments)
    )
    least = max(constants)
    declared = dist.moment_constant
    violation = not math.isfinite(least) or (declared is not None and least > declared)
    if violation:
        logger.warning(
            f"Нарушение оценки моментов для {dist.kind.value}: c_min={least}, объявлено {declared}"
        )
    return MomentBoundReport(orders, moments, constants, least, declared, violation)
