"""
Преобразование Фурье-Стилтьеса и производные от него характеристики мер
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy import signal, stats

from src.core.validation import require, validator
from src.spectral_measures.models import (
    CesaroFit,
    HolderReport,
    L2GrowthVerdict,
    RajchmanReport,
    SpectralMeasureApprox,
)
from src.utils.exceptions import DomainError, FitError

logger = logging.getLogger(__name__)

# Размер блока по времени при векторизованной сумме экспонент
TIME_CHUNK = 256
PAIR_CHUNK = 512
MAX_LATTICE_LAGS = 2 * 10**7


def fs_transform(measure: SpectralMeasureApprox, t):
    """
    μ̂(t) = Σ w_k e^{−i t x_k}

    Скаляр дает complex, массив дает массив той же формы.
    """
    times = np.asarray(t, dtype=float)
    flat = times.ravel()
    result = np.empty(flat.size, dtype=complex)
    for start in range(0, flat.size, TIME_CHUNK):
        phase = np.multiply.outer(flat[start : start + TIME_CHUNK], measure.positions)
        real = np.sum(measure.weights * np.cos(phase), axis=1)
        imag = -np.sum(measure.weights * np.sin(phase), axis=1)
        result[start : start + TIME_CHUNK] = real + 1j * imag
    if times.ndim == 0:
        return complex(result[0])
    return result.reshape(times.shape)


def _lattice_autocorrelation(measure: SpectralMeasureApprox):
    """Лаги и автокорреляция весов, если атомы лежат на решетке шага lattice_step"""
    step = measure.lattice_step
    if step is None:
        return None
    offsets = (measure.positions - measure.positions[0]) / step
    index = np.rint(offsets).astype(np.int64)
    if np.max(np.abs(offsets - index)) > 1e-6 or 2 * index[-1] + 1 > MAX_LATTICE_LAGS:
        return None
    grid = np.zeros(index[-1] + 1)
    np.add.at(grid, index, measure.weights)
    correlation = signal.fftconvolve(grid, grid[::-1], mode="full")
    lags = np.arange(-index[-1], index[-1] + 1) * step
    keep = np.abs(correlation) > 1e-10 * np.max(np.abs(correlation))
    return lags[keep], correlation[keep]


def cesaro_average(measure: SpectralMeasureApprox, T) -> np.ndarray:
    """
    ⟨|μ̂|²⟩_T = (1/T)∫_0^T |μ̂(t)|² dt в замкнутой форме:
    Σ_{k,l} w_k w_l · sin(TΔ_kl)/(TΔ_kl), Δ_kl = x_k − x_l.
    """
    horizons = np.atleast_1d(np.asarray(T, dtype=float))
    if np.any(horizons <= 0):
        raise DomainError("Горизонты усреднения T должны быть > 0")
    lattice = _lattice_autocorrelation(measure)
    result = np.zeros(horizons.size)
    if lattice is not None:
        lags, correlation = lattice
        for i, horizon in enumerate(horizons):
            result[i] = np.sum(correlation * np.sinc(horizon * lags / np.pi))
        return result

    x, w = measure.positions, measure.weights
    for start in range(0, x.size, PAIR_CHUNK):
        delta = x[start : start + PAIR_CHUNK, None] - x[None, :]
        pair_weights = w[start : start + PAIR_CHUNK, None] * w[None, :]
        for i, horizon in enumerate(horizons):
            result[i] += np.sum(pair_weights * np.sinc(horizon * delta / np.pi))
    return result


def cesaro_decay(measure: SpectralMeasureApprox, T_grid: Sequence[float]) -> CesaroFit:
    """Наклон log⟨|μ̂|²⟩_T против log T дает −α̂"""
    times = np.asarray(T_grid, dtype=float)
    if times.size < 3 or np.any(times <= 0):
        raise FitError("Сетка T должна содержать не менее трех положительных точек")
    if math.log10(times.max() / times.min()) < 2 - 1e-12:
        raise FitError(
            "Сетка T должна охватывать не менее двух декад",
            details={"t_min": float(times.min()), "t_max": float(times.max())},
        )
    averages = cesaro_average(measure, times)
    if np.any(averages <= 0):
        raise FitError("Неположительное среднее по Чезаро, логарифмическая подгонка невозможна")
    fit = stats.linregress(np.log(times), np.log(averages))
    r_squared = float(fit.rvalue**2) if np.isfinite(fit.rvalue) else 1.0
    result = CesaroFit(
        alpha=float(-fit.slope),
        intercept=float(fit.intercept),
        r_squared=r_squared,
        times=times,
        averages=averages,
    )
    logger.debug(f"Чезаро-подгонка {measure.label}: α̂={result.alpha:.4f}, R²={r_squared:.4f}")
    return result


def cantor_fs(u, depth: int) -> float:
    """
    Γ(u) = ∏_{j=1}^{depth} cos(2πu/3^j)

    Для целого u угол берется как 2π·(u mod 3^j)/3^j в целочисленной
    арифметике, поэтому Γ(3n) на глубине d и Γ(n) на глубине d−1
    совпадают побитно.
    """
    require(validator.validate_integer_at_least("depth", depth, 1))
    exact = isinstance(u, (int, np.integer)) or (
        isinstance(u, float) and u.is_integer() and abs(u) < 2**53
    )
    value = 1.0
    if exact:
        n = int(u)
        for j in range(1, depth + 1):
            period = 3**j
            value *= math.cos(2 * math.pi * ((n % period) / period))
    else:
        for j in range(1, depth + 1):
            value *= math.cos(2 * math.pi * float(u) / 3**j)
    return value


def holder_constant(
    measure: SpectralMeasureApprox,
    alpha: float,
    scales: Sequence[float],
    bound_factor: float = 4.0,
) -> HolderReport:
    """
    max μ(I)/|I|^α по скользящим отрезкам I = [x_k, x_k + h]

    Максимум по отрезкам длины h достигается на отрезке, левый конец
    которого совпадает с атомом. bounded=False означает, что константа
    растет при уменьшении масштаба больше чем в bound_factor раз.
    """
    require(validator.validate_range("alpha", alpha, 0.0, 1.0))
    scales = np.sort(np.asarray(scales, dtype=float))[::-1]
    if scales.size == 0 or np.any(scales <= 0) or np.any(scales >= 1):
        raise DomainError("Масштабы должны лежать в (0, 1)")

    cumulative = np.concatenate(([0.0], np.cumsum(measure.weights)))
    constants = []
    for h in scales:
        right = np.searchsorted(measure.positions, measure.positions + h, side="right")
        masses = cumulative[right] - cumulative[np.arange(measure.n_atoms)]
        constants.append(float(np.max(masses) / h**alpha))

    smallest_positive = min(c for c in constants if c > 0) if any(c > 0 for c in constants) else 1.0
    growth = max(constants) / smallest_positive
    report = HolderReport(
        alpha=float(alpha),
        constant=max(constants),
        grid_scale=float(scales[-1]),
        scales=tuple(float(h) for h in scales),
        per_scale_constants=tuple(constants),
        growth_factor=float(growth),
        bounded=bool(growth <= bound_factor),
    )
    if not report.bounded:
        logger.warning(
            f"Мера {measure.label} не выглядит равномерно {alpha:.3f}-гельдеровой: "
            f"рост константы в {growth:.2f} раз"
        )
    return report


def rajchman_test(
    measure: SpectralMeasureApprox,
    t_grid: Sequence[float],
    n_windows: int = 8,
    decay_threshold: float = 0.5,
) -> RajchmanReport:
    """
    Супремумы |μ̂| по последовательным окнам сетки t. Вердикт "decaying",
    если последний супремум меньше первого больше чем в 1/decay_threshold раз.
    """
    times = np.asarray(t_grid, dtype=float)
    if times.size < n_windows or np.any(np.diff(times) <= 0):
        raise DomainError("Сетка t должна быть возрастающей и не короче числа окон")
    windows = np.array_split(times, n_windows)
    sups = [float(np.max(np.abs(fs_transform(measure, window)))) for window in windows]
    ratio = sups[-1] / sups[0] if sups[0] > 0 else 0.0
    verdict = "decaying" if ratio < decay_threshold else "non_decaying"
    return RajchmanReport(
        window_starts=tuple(float(window[0]) for window in windows),
        tail_sups=tuple(sups),
        decay_ratio=float(ratio),
        verdict=verdict,
    )


def l2_growth_verdict(
    measure: SpectralMeasureApprox,
    t_start: float = 8.0,
    doublings: int = 8,
    tolerance: float = 0.2,
    grid: Optional[Sequence[float]] = None,
) -> L2GrowthVerdict:
    """
    ∫_0^T |μ̂|² dt = T·⟨|μ̂|²⟩_T на горизонтах T_k = t_start·2^k.
    Мера считается а.н., если последнее удвоение увеличивает интеграл
    меньше чем в (1 + tolerance) раз.
    """
    times = (
        np.asarray(grid, dtype=float)
        if grid is not None
        else t_start * 2.0 ** np.arange(doublings + 1)
    )
    integrals = times * cesaro_average(measure, times)
    last_ratio = float(integrals[-1] / integrals[-2])
    return L2GrowthVerdict(
        times=tuple(times.tolist()),
        integrals=tuple(integrals.tolist()),
        last_ratio=last_ratio,
        absolutely_continuous=bool(last_ratio < 1 + tolerance),
    )
