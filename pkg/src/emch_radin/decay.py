"""
Точная и Монте-Карло кривая возврата к равновесию g(t) = Π_k χ(2ε(k)t)
и классификация огибающей
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
from scipy import signal, stats

from src.core.validation import require, validator
from src.disorder import (
    DistributionKind,
    RealizationSeed,
    analytic_moment,
    average,
    cosine_moment,
    draw,
)
from src.emch_radin.models import (
    CURVE_TOLERANCE,
    DecayCurve,
    DecayKind,
    EmchRadinSpec,
    EnvelopeVerdict,
)
from src.utils.exceptions import DomainError, SizeError, UnsupportedOperationError

logger = logging.getLogger(__name__)

# Отброшенные при усечении множители должны быть в пределах этого от 1
TAIL_TOLERANCE = 1e-12
MIN_MC_SAMPLES = 1000
MIN_DECADES = 2.0
RECURRENCE_WINDOWS = 3
ALMOST_PERIODIC_LEVEL = 0.5
GOOD_FIT_R2 = 0.98
# log|g| ниже этого уровня в подгонку не попадает
ENVELOPE_FLOOR = 1e-250
MIN_PEAKS = 4


def delta_coefficient(gamma: float) -> float:
    """
    δ = tr(σ^x e^{−γσ^x})/tr(e^{−γσ^x}) = −tanh γ

    При γ = 0 коэффициент обращается в ноль и f(t) ≡ 0.
    """
    gamma = require(validator.validate_finite("gamma", gamma))
    if gamma == 0.0:
        logger.warning("γ = 0: δ = 0, начальное состояние вырождено")
    return -math.tanh(gamma)


def _second_moment(spec: EmchRadinSpec) -> float:
    if spec.disorder is None:
        return 1.0
    if spec.disorder.has_analytic_moments:
        return float(analytic_moment(spec.disorder, 2))
    return spec.disorder.sup_abs**2


def _certify_tail(spec: EmchRadinSpec, t_max: float) -> float:
    """
    Граница |1 − Π_{отброшенные} χ| ≤ Σ (1 − χ(2εt)) ≤ 2t²·Av(J²)·Σε²
    """
    bound = 2.0 * t_max**2 * _second_moment(spec) * spec.tail_square_sum
    if bound > TAIL_TOLERANCE:
        raise SizeError(
            f"Хвост усеченного профиля не сертифицирован: оценка {bound:.2e} при t={t_max}",
            details={"bound": bound, "t_max": t_max},
        )
    return bound


def exact_decay(spec: EmchRadinSpec, t):
    """g(t) = Π_k χ(2ε(k)t), χ(a) = Av(cos aJ); для J ≡ 1 χ = cos"""
    times = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(times)):
        raise DomainError("Время должно быть конечным")
    if times.size:
        _certify_tail(spec, float(np.max(np.abs(times))))
    arguments = 2.0 * np.multiply.outer(spec.epsilons, times)
    if spec.disorder is None:
        factors = np.cos(arguments)
    else:
        factors = np.asarray(cosine_moment(spec.disorder, arguments))
    result = np.prod(factors, axis=0)
    return float(result) if result.ndim == 0 else result


def _metadata(spec: EmchRadinSpec, **extra) -> Dict:
    law = "nonrandom" if spec.disorder is None else spec.disorder.kind.value
    metadata = {
        "law": law,
        "d": spec.d,
        "beta": spec.beta_coupling,
        "gamma": spec.gamma,
        "coordination": spec.coordination,
        "profile": spec.label,
    }
    metadata.update(spec.stability())
    metadata.update(extra)
    return metadata


def decay_curve(spec: EmchRadinSpec, t_grid) -> DecayCurve:
    """Точная кривая на сетке вместе с δ и метаданными устойчивости"""
    times = np.asarray(t_grid, dtype=float)
    return DecayCurve(
        times=times,
        values=exact_decay(spec, times),
        delta=delta_coefficient(spec.gamma),
        label="exact",
        metadata=_metadata(spec),
    )


@dataclass(frozen=True, eq=False)
class DecayProductEstimator:
    """Π_k cos(2ε(k)J_k t) на сетке для одной реализации связей узла"""

    spec: EmchRadinSpec
    times: np.ndarray

    def __call__(self, rng: np.random.Generator) -> np.ndarray:
        epsilons = self.spec.epsilons
        if self.spec.disorder is None:
            couplings = np.ones_like(epsilons)
        else:
            couplings = draw(self.spec.disorder, rng, epsilons.size)
        return np.prod(np.cos(2.0 * np.multiply.outer(epsilons * couplings, self.times)), axis=0)


def mc_decay(
    spec: EmchRadinSpec,
    t_grid,
    n_samples: int,
    seed: Optional[RealizationSeed] = None,
    n_workers: Optional[int] = None,
) -> DecayCurve:
    """Монте-Карло среднее произведения косинусов по свежим связям каждой реализации"""
    n_samples = require(validator.validate_integer_at_least("n_samples", n_samples, MIN_MC_SAMPLES))
    times = np.asarray(t_grid, dtype=float)
    seed = seed if seed is not None else RealizationSeed(0)
    estimate = average(DecayProductEstimator(spec, times), n_samples, seed, n_workers)
    logger.info(f"MC g(t) по {n_samples} реализациям на {times.size} точках")
    return DecayCurve(
        times=times,
        values=np.clip(estimate.mean, -1.0, 1.0),
        delta=delta_coefficient(spec.gamma),
        std_error=estimate.std_error,
        label="mc",
        metadata=_metadata(spec, n_samples=n_samples, master_seed=seed.master_seed),
    )


def _recurrence(times: np.ndarray, magnitude: np.ndarray) -> float:
    """min по T ∈ {t_max/2, t_max/4, ...} от sup_{[T, 2T]} |g|"""
    t_max = float(times[-1])
    sups = []
    for k in range(1, RECURRENCE_WINDOWS + 1):
        lower = t_max / 2**k
        window = (times >= lower) & (times <= 2 * lower)
        if window.any():
            sups.append(float(magnitude[window].max()))
    return min(sups) if sups else float(magnitude[-1])


def _fit(x: np.ndarray, y: np.ndarray):
    if x.size < 3 or np.ptp(x) == 0:
        return None, None
    fit = stats.linregress(x, y)
    return float(fit.slope), float(fit.rvalue**2)


def decay_envelope_classify(curve: DecayCurve) -> EnvelopeVerdict:
    """
    Вердикт по огибающей |g|: возвраты (sup на поздних окнах > 0.5) дают
    почти-периодичность; иначе сравниваются подгонки log|огибающей| по log t
    (степенной закон) и по t² (гауссов). Без хорошей подгонки вердикт
    inconclusive.
    """
    positive = curve.times > 0
    times = curve.times[positive]
    magnitude = np.abs(curve.values[positive])
    order = np.argsort(times)
    times, magnitude = times[order], magnitude[order]
    if times.size < 2 or math.log10(times[-1] / times[0]) < MIN_DECADES:
        raise DomainError(f"Сетка должна охватывать не менее {MIN_DECADES:g} декад по t")

    recurrence = _recurrence(times, magnitude)
    if recurrence > ALMOST_PERIODIC_LEVEL:
        verdict = EnvelopeVerdict(DecayKind.ALMOST_PERIODIC, recurrence, None, None, None, None, 0)
        logger.info(f"Огибающая: почти-периодическая, возврат {recurrence:.4f}")
        return verdict

    # пики, опускающиеся между собой почти до нуля (узлы осцилляций)
    peaks, properties = signal.find_peaks(magnitude, prominence=0.0)
    peaks = peaks[properties["prominences"] >= 0.5 * magnitude[peaks]]
    points = peaks if peaks.size >= MIN_PEAKS else np.arange(times.size)
    points = points[magnitude[points] > ENVELOPE_FLOOR]
    t_env = times[points]
    log_env = np.log(magnitude[points])

    exponent, power_r2 = _fit(np.log(t_env), log_env)
    rate, gaussian_r2 = _fit(t_env**2, log_env)
    kind = DecayKind.INCONCLUSIVE
    if power_r2 is not None and gaussian_r2 is not None:
        if power_r2 >= GOOD_FIT_R2 and power_r2 > gaussian_r2:
            kind = DecayKind.POWER_LAW
        elif gaussian_r2 >= GOOD_FIT_R2 and gaussian_r2 > power_r2:
            kind = DecayKind.GAUSSIAN_LIKE
    verdict = EnvelopeVerdict(
        kind=kind,
        recurrence=recurrence,
        exponent=exponent,
        power_r2=power_r2,
        gaussian_r2=gaussian_r2,
        gaussian_rate=None if rate is None else -rate,
        n_envelope_points=int(points.size),
    )
    logger.info(
        f"Огибающая: {kind.value}, показатель {exponent}, R² степ.={power_r2}, R² гаусс.={gaussian_r2}"
    )
    return verdict


def reference_forms(spec: EmchRadinSpec, t) -> Dict[str, object]:
    """
    Точная замкнутая форма рядом со справочной для ближайших соседей:
    uniform (sin(2βt)/2t)^z, gaussian exp(−2zt²)
    """
    if spec.label != "nearest_neighbor" or spec.disorder is None:
        raise UnsupportedOperationError(
            "Справочные формы определены только для ближайших соседей со случайными связями"
        )
    kind = spec.disorder.kind
    times = np.asarray(t, dtype=float)
    beta, z = spec.beta_coupling, spec.coordination
    if kind is DistributionKind.BERNOULLI:
        reference = np.cos(2 * beta * times) ** z
    elif kind is DistributionKind.UNIFORM:
        safe = np.where(times == 0, 1.0, times)
        reference = np.where(times == 0, beta, np.sin(2 * beta * times) / (2 * safe)) ** z
    elif kind is DistributionKind.GAUSSIAN:
        reference = np.exp(-2.0 * z * times**2)
    else:
        raise UnsupportedOperationError(f"Справочной формы для закона {kind.value} нет")
    derived = exact_decay(spec, times)
    return {
        "law": kind.value,
        "times": times,
        "derived": derived,
        "reference": reference,
        "max_difference": (
            float(np.max(np.abs(np.asarray(derived) - reference))) if times.size else 0.0
        ),
    }


def halving_oracle(t) -> np.ndarray:
    """(sin t/t)², предел произведения Π_{n≥1} cos²(t/2^n)"""
    return np.sinc(np.asarray(t, dtype=float) / np.pi) ** 2


def nonrandom_profile_decay(t_grid, cutoff: int = 60, gamma: float = 1.0) -> DecayCurve:
    """
    Нерандомизированная цепочка с ε(|n|) = 2^{−|n|−1}: усеченное произведение,
    отклонение от (sin t/t)² и вердикт огибающей в метаданных
    """
    spec = EmchRadinSpec.halving_chain(cutoff=cutoff, gamma=gamma)
    curve = decay_curve(spec, t_grid)
    curve.metadata["oracle_deviation"] = float(np.max(np.abs(curve.values - halving_oracle(curve.times))))
    positive = curve.times[curve.times > 0]
    if positive.size >= 2 and math.log10(positive.max() / positive.min()) >= MIN_DECADES:
        verdict = decay_envelope_classify(curve)
        curve.metadata["envelope"] = verdict.kind.value
        curve.metadata["exponent"] = verdict.exponent
    return curve


def upper_envelope(values) -> np.ndarray:
    """sup_{s ≥ t} |g(s)| на сетке (невозрастающая огибающая)"""
    magnitude = np.abs(np.asarray(values, dtype=float))
    return np.maximum.accumulate(magnitude[::-1])[::-1]


def curves_agree(exact: DecayCurve, mc: DecayCurve, n_sigma: float = 3.0) -> float:
    """Доля точек сетки, где |g_mc − g| ≤ n_sigma·σ (с допуском округления)"""
    if mc.std_error is None or not np.array_equal(exact.times, mc.times):
        raise DomainError("Сравнение требует MC кривой с ошибками на той же сетке")
    deviation = np.abs(mc.values - exact.values)
    return float(np.mean(deviation <= n_sigma * mc.std_error + CURVE_TOLERANCE))
