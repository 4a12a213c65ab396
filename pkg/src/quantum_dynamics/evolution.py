"""
Эволюция на конечных усечениях: e^{−itH}ψ, времена пребывания, моменты
и показатели диффузии
"""

import logging
import math
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import integrate

from src.core.validation import require, validator
from src.lattice_operators import OperatorMatrix
from src.quantum_dynamics.models import (
    ExponentReport,
    SojournResult,
    StateVector,
    TransportSeries,
)
from src.utils.exceptions import DomainError, FitError

logger = logging.getLogger(__name__)

# Порог отношения J(T)/J(T/2), выше которого рост считается линейным
LINEAR_GROWTH_RATIO = 1.5


def _check_dimension(op: OperatorMatrix, psi: StateVector) -> None:
    if op.dimension != psi.dimension:
        raise DomainError(
            f"Размерность состояния {psi.dimension} не совпадает с оператором {op.dimension}",
            details={"operator": op.dimension, "state": psi.dimension},
        )


def spectral_coefficients(op: OperatorMatrix, psi: StateVector):
    """(E_k, V, c = V^H ψ)"""
    _check_dimension(op, psi)
    values, vectors = op.eigensystem
    return values, vectors, vectors.conj().T @ psi.amplitudes


def evolved_amplitudes(op: OperatorMatrix, psi: StateVector, times) -> np.ndarray:
    """Амплитуды ψ(t) для набора времен: массив (число времен, размерность)"""
    values, vectors, coefficients = spectral_coefficients(op, psi)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    phases = np.exp(-1j * np.multiply.outer(times, values)) * coefficients
    return phases @ vectors.T


def evolve(op: OperatorMatrix, psi0: StateVector, t: float) -> StateVector:
    """e^{−itH}ψ₀ через полное спектральное разложение"""
    _check_dimension(op, psi0)
    if t == 0:
        return psi0
    amplitudes = evolved_amplitudes(op, psi0, [t])[0]
    return StateVector(amplitudes)


def probability_profile(op: OperatorMatrix, psi: StateVector, t) -> np.ndarray:
    """P_{ψ,t}(x) = |(e^{−itH}ψ)(x)|²"""
    profile = np.abs(evolved_amplitudes(op, psi, t)) ** 2
    return profile[0] if np.ndim(t) == 0 else profile


def distances(op: OperatorMatrix, origin: int) -> np.ndarray:
    """Евклидово расстояние |x − x_origin| по карте координат"""
    shift = op.coordinates - op.coordinates[origin]
    return np.sqrt(np.sum(shift.astype(float) ** 2, axis=1))


def default_origin(psi: StateVector) -> int:
    return int(np.argmax(psi.probabilities))


def sojourn_time(
    op: OperatorMatrix, psi: StateVector, region: Iterable[int], T_max: float
) -> SojournResult:
    """
    J(S;ψ) = ∫_{−T}^{T} ‖P_S e^{−itH}ψ‖² dt в замкнутой форме:
    Σ_{k,l} Re(G_kl)·2T·sinc(TΔ_kl), G_kl = Σ_{x∈S} V_xk c_k conj(V_xl c_l).

    Признак линейного роста сравнивает J(T) и J(T/2): для стационарной
    компоненты отношение стремится к 2.
    """
    sites = np.unique(np.asarray(list(region), dtype=int))
    if sites.size == 0:
        raise DomainError("Область S пуста")
    if sites.min() < 0 or sites.max() >= op.dimension:
        raise DomainError("Область S выходит за пределы решетки")
    require(validator.validate_positive("T_max", T_max))

    values, vectors, coefficients = spectral_coefficients(op, psi)
    projected = vectors[sites, :] * coefficients
    gram = (projected.T @ projected.conj()).real
    gaps = np.subtract.outer(values, values)

    def integral(horizon: float) -> float:
        return float(np.sum(gram * 2 * horizon * np.sinc(horizon * gaps / np.pi)))

    value = integral(T_max)
    half = integral(T_max / 2)
    ratio = value / half if half > 0 else 0.0
    result = SojournResult(
        value=value,
        t_max=float(T_max),
        half_value=half,
        growth_ratio=ratio,
        linear_growth=bool(ratio > LINEAR_GROWTH_RATIO),
    )
    logger.debug(f"Время пребывания: J={value:.6g}, J(T)/J(T/2)={ratio:.3f}")
    return result


def cesaro_running_average(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    """(1/T)∫_0^T значение dt по трапециям; при T = 0 берется само значение"""
    cumulative = integrate.cumulative_trapezoid(values, times, initial=0.0)
    averages = np.empty_like(values)
    positive = times > 0
    averages[positive] = cumulative[positive] / times[positive]
    averages[~positive] = values[~positive]
    return averages


def moments(
    op: OperatorMatrix,
    psi: StateVector,
    m: float,
    time_grid: Sequence[float],
    origin: Optional[int] = None,
) -> TransportSeries:
    """
    ⟨|X|^m⟩(t) = Σ_x |x|^m P_{ψ,t}(x) и его средние ⟨·⟩_T

    Args:
        origin: Индекс узла-начала отсчета; по умолчанию максимум |ψ|²
    """
    require(validator.validate_positive("m", m))
    times = np.asarray(time_grid, dtype=float)
    if times.size < 2 or times[0] < 0:
        raise DomainError("Сетка времен должна быть неотрицательной и содержать >= 2 точек")
    origin = default_origin(psi) if origin is None else int(origin)
    weights = distances(op, origin) ** m
    profile = np.abs(evolved_amplitudes(op, psi, times)) ** 2
    values = profile @ weights
    series = TransportSeries(
        times=times,
        values=values,
        observable=f"abs_x_pow_{m:g}",
        time_averages=cesaro_running_average(times, values),
        metadata={"m": m, "origin": origin, "dimension": op.dimension},
    )
    logger.debug(f"Моменты |X|^{m:g}: {times.size} времен, максимум {values.max():.4g}")
    return series


def diffusion_constants(series: TransportSeries) -> dict:
    """
    ⟨|X|²⟩/t (определение через t) и ⟨|X|²⟩/t² (баллистическая
    нормировка); первое расходится при баллистическом движении.
    """
    positive = series.times > 0
    t = series.times[positive]
    values = series.values[positive]
    return {
        "times": t,
        "over_t": values / t,
        "over_t_squared": values / t**2,
    }


def diffusion_exponents(
    series: TransportSeries, m: Optional[float] = None, n_windows: int = 3
) -> ExponentReport:
    """
    β_m^± как min/max наклонов log⟨|X|^m⟩_T по log T^m в последних
    n_windows диадических окнах [T_max/2^{k+1}, T_max/2^k].
    """
    m = float(series.metadata.get("m", 1.0) if m is None else m)
    data = series.time_averages if series.time_averages is not None else series.values
    positive = (series.times > 0) & (data > 0)
    times, data = series.times[positive], data[positive]
    if times.size < 3 or math.log10(times[-1] / times[0]) < 2 - 1e-12:
        raise FitError(
            "Для показателей диффузии нужна сетка не короче двух декад",
            details={"points": int(times.size)},
        )

    log_t, log_a = np.log(times), np.log(data)
    t_max = times[-1]
    slopes, windows = [], []
    for k in range(n_windows, 0, -1):
        low, high = t_max / 2**k, t_max / 2 ** (k - 1)
        values = np.interp(np.log([low, high]), log_t, log_a)
        slopes.append(float((values[1] - values[0]) / (m * math.log(2))))
        windows.append((float(low), float(high)))

    lower, upper = min(slopes), max(slopes)
    clipped = lower < 0 or upper > 1
    if clipped:
        logger.warning(
            f"Показатели диффузии вне [0, 1] (β−={lower:.3f}, β+={upper:.3f}): "
            f"эффект конечного размера, значения обрезаны"
        )
        lower, upper = min(max(lower, 0.0), 1.0), min(max(upper, 0.0), 1.0)
    return ExponentReport(
        m=m,
        lower=lower,
        upper=upper,
        window_slopes=tuple(slopes),
        windows=tuple(windows),
        clipped=clipped,
    )
