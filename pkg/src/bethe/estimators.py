"""
Показатель Ляпунова, функция свободной энергии φ(s;ζ) и критерии
протяженных состояний на дереве Бете

Оценщики работают на корневом дереве: корень имеет K детей, на расстоянии
|x| от корня ровно K^{|x|} вершин.
"""

import logging
import math
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy import special, stats

from src.bethe.models import (
    BetheModelSpec,
    CriteriaReport,
    FreeEnergyEstimate,
    InequalityCheck,
    LyapunovEstimate,
)
from src.bethe.population import default_seed, path_green, root_green, run_population
from src.core.validation import require, validator
from src.disorder import RealizationSeed
from src.utils.exceptions import DomainError, SizeError

logger = logging.getLogger(__name__)

DEFAULT_ETAS = (1e-1, 1e-2, 1e-3)
MIN_DEPTH = 8
N_BATCHES = 10
# Доля эффективного размера выборки, ниже которой момент считается хвостовым
ESS_FRACTION = 0.01


def _path_logs(
    spec: BetheModelSpec,
    energy: float,
    eta: float,
    depth: int,
    pool_size: Optional[int],
    generations: Optional[int],
    seed: RealizationSeed,
    n_paths: Optional[int] = None,
) -> np.ndarray:
    zeta = complex(energy, eta)
    pool, _, _ = run_population(spec, [zeta], pool_size, generations, seed=seed)
    n_paths = pool.shape[1] if n_paths is None else int(n_paths)
    return path_green(spec, zeta, pool[0], depth, n_paths, seed.generator(depth, n_paths))


def lyapunov_exponent(
    spec: BetheModelSpec,
    energy: float,
    etas: Sequence[float] = DEFAULT_ETAS,
    pool_size: Optional[int] = None,
    generations: Optional[int] = None,
    seed: Optional[RealizationSeed] = None,
    depth: int = 16,
) -> LyapunovEstimate:
    """
    L(E) = −lim_{η↓0} Av log|G(0,0;E+iη)|

    Значения по сетке η экстраполируются линейной подгонкой по η; для
    перекрестной проверки при наименьшем η берется наклон Av log|G(0,x)|
    по |x| вдоль пути.
    """
    etas = tuple(sorted((float(e) for e in etas), reverse=True))
    if len(etas) < 2 or min(etas) <= 0:
        raise DomainError("Для экстраполяции нужны хотя бы два положительных η")
    seed = default_seed(seed)

    per_eta, errors = [], []
    for index, eta in enumerate(etas):
        pool, _, _ = run_population(
            spec, [complex(energy, eta)], pool_size, generations, seed=seed.child(index)
        )
        logs = np.log(np.abs(pool[0]))
        per_eta.append(float(-np.mean(logs)))
        errors.append(float(np.std(logs, ddof=1) / math.sqrt(logs.size)))
    fit = stats.linregress(etas, per_eta)

    logs = _path_logs(
        spec, energy, etas[-1], depth, pool_size, generations, seed.child(len(etas))
    )
    depths = np.arange(depth + 1)
    path_fit = stats.linregress(depths, logs.mean(axis=0))

    estimate = LyapunovEstimate(
        energy=float(energy),
        etas=etas,
        per_eta=tuple(per_eta),
        per_eta_error=tuple(errors),
        extrapolated=float(fit.intercept),
        path_slope=float(-path_fit.slope),
    )
    logger.info(
        f"L(E={energy}) при K={spec.K}, λ={spec.lam}: {estimate.extrapolated:.5f} "
        f"(наклон по пути {estimate.path_slope:.5f})"
    )
    return estimate


def _slope_of_log_moment(logs: np.ndarray, s: float) -> float:
    depths = np.arange(1, logs.shape[1])
    moments = special.logsumexp(s * logs[:, 1:], axis=0) - math.log(logs.shape[0])
    return float(stats.linregress(depths, moments).slope)


def free_energy_fn(
    spec: BetheModelSpec,
    energy: float,
    s: float,
    eta: float = 1e-3,
    x_max: int = 16,
    pool_size: Optional[int] = None,
    generations: Optional[int] = None,
    seed: Optional[RealizationSeed] = None,
) -> FreeEnergyEstimate:
    """
    φ(s;E+iη) = lim log Av|G(0,x)|^s / |x| по наклону на |x| = 1..x_max

    Стандартная ошибка берется по разбиению путей на партии; момент
    помечается хвостовым, если эффективный размер выборки весов |G|^s на
    глубине x_max меньше доли ESS_FRACTION.
    """
    s = require(validator.validate_range("s", s, -spec.kappa, 2.0))
    require(validator.validate_positive("eta", eta))
    if int(x_max) < MIN_DEPTH:
        raise SizeError(f"x_max должен быть >= {MIN_DEPTH}, получено {x_max}")
    seed = default_seed(seed)
    logs = _path_logs(spec, energy, eta, int(x_max), pool_size, generations, seed)

    phi = _slope_of_log_moment(logs, s)
    batches = [
        _slope_of_log_moment(batch, s) for batch in np.array_split(logs, N_BATCHES, axis=0)
    ]
    std_error = float(np.std(batches, ddof=1) / math.sqrt(N_BATCHES))

    weights = np.exp(s * logs[:, -1] - np.max(s * logs[:, -1]))
    ess = float(weights.sum() ** 2 / np.sum(weights**2))
    tail_dominated = ess < max(30.0, ESS_FRACTION * logs.shape[0])
    if tail_dominated:
        logger.warning(
            f"Момент |G|^{s:g} определяется хвостом: эффективный размер выборки {ess:.1f}"
        )

    depths = np.arange(logs.shape[1])
    log_moments = special.logsumexp(s * logs, axis=0) - math.log(logs.shape[0])
    return FreeEnergyEstimate(
        s=float(s),
        energy=float(energy),
        eta=float(eta),
        phi=phi,
        std_error=std_error,
        depths=depths,
        log_moments=log_moments,
        effective_sample_size=ess,
        tail_dominated=bool(tail_dominated),
    )


def inequality_suite(
    spec: BetheModelSpec,
    energies: Iterable[float],
    s_values: Sequence[float] = (0.25, 0.5, 1.0),
    eta: float = 0.1,
    x_max: int = 16,
    pool_size: Optional[int] = None,
    generations: Optional[int] = None,
    seed: Optional[RealizationSeed] = None,
    n_sigma: float = 3.0,
) -> List[InequalityCheck]:
    """
    φ(s;ζ) ≤ −(s/2)·log K (из тождества Уорда и выпуклости) и
    φ(s) ≥ −s·L; граница с полным наклоном −s·log K только сообщается как запас
    """
    seed = default_seed(seed)
    log_k = math.log(spec.K)
    checks = []
    for index, energy in enumerate(energies):
        logs = _path_logs(spec, energy, eta, x_max, pool_size, generations, seed.child(index))
        depths = np.arange(logs.shape[1])
        lyapunov = -float(stats.linregress(depths, logs.mean(axis=0)).slope)
        for s in s_values:
            s = require(validator.validate_range("s", s, -spec.kappa, 2.0))
            phi = _slope_of_log_moment(logs, s)
            batches = [
                _slope_of_log_moment(batch, s)
                for batch in np.array_split(logs, N_BATCHES, axis=0)
            ]
            error = float(np.std(batches, ddof=1) / math.sqrt(N_BATCHES))
            slack = n_sigma * error + 1e-9
            half_bound = -0.5 * s * log_k
            convexity_bound = -s * lyapunov
            checks.append(
                InequalityCheck(
                    s=float(s),
                    energy=float(energy),
                    eta=float(eta),
                    phi=phi,
                    std_error=error,
                    half_slope_bound=half_bound,
                    full_slope_bound=-s * log_k,
                    convexity_bound=convexity_bound,
                    half_slope_holds=bool(phi <= half_bound + slack),
                    full_slope_margin=float(-s * log_k - phi),
                    convexity_holds=bool(phi >= convexity_bound - slack),
                )
            )
    failed = sum(not (c.half_slope_holds and c.convexity_holds) for c in checks)
    logger.info(f"Неравенства для φ(s): проверено {len(checks)}, нарушено {failed}")
    return checks


def extended_states_criteria(
    spec: BetheModelSpec,
    energy: float,
    etas: Sequence[float] = DEFAULT_ETAS,
    pool_size: Optional[int] = None,
    generations: Optional[int] = None,
    seed: Optional[RealizationSeed] = None,
    ac_fraction: float = 0.95,
) -> CriteriaReport:
    """
    L > log K и φ(1) < −log K в исходной ориентации, обратные неравенства
    в ориентации резонансной делокализации и доля Im G(0,0) выше порога
    10·η_min. Энергия считается лежащей в а.н. области при доле > ac_fraction.
    """
    seed = default_seed(seed)
    eta_min = float(min(etas))
    lyapunov = lyapunov_exponent(spec, energy, etas, pool_size, generations, seed.child(0))
    free_energy = free_energy_fn(
        spec, energy, 1.0, eta_min, pool_size=pool_size, generations=generations,
        seed=seed.child(1),
    )
    root = root_green(
        spec, complex(energy, eta_min), pool_size, generations, seed=seed.child(2)
    )
    log_k = math.log(spec.K)
    report = CriteriaReport(
        K=spec.K,
        lam=spec.lam,
        energy=float(energy),
        eta=eta_min,
        lyapunov=lyapunov.extrapolated,
        phi_one=free_energy.phi,
        log_K=log_k,
        delta_K=spec.delta_K,
        lyapunov_exceeds_log_k=bool(lyapunov.extrapolated > log_k),
        free_energy_below_log_k=bool(free_energy.phi < -log_k),
        lyapunov_below_log_k=bool(lyapunov.extrapolated < log_k),
        free_energy_above_log_k=bool(free_energy.phi > -log_k),
        im_positive_fraction=root.im_positive_fraction,
        in_ac_region=bool(root.im_positive_fraction > ac_fraction),
    )
    logger.info(
        f"Критерии при K={spec.K}, λ={spec.lam}, E={energy}: L={report.lyapunov:.4f}, "
        f"φ(1)={report.phi_one:.4f}, log K={log_k:.4f}, доля Im G={report.im_positive_fraction:.3f}"
    )
    return report
