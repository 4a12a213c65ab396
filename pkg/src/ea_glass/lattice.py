"""
Конечные решетки: калибровочное преобразование, точные основные состояния
перебором, разложение на кластеры и свободная энергия
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy import special

from config import Config
from src.core.validation import require, validator
from src.disorder import (
    DistributionSpec,
    MonteCarloEstimate,
    RealizationSeed,
    average,
    draw,
    evaluate_realizations,
)
from src.ea_glass.clusters import CLUSTER_WEIGHTS, GEOMETRY_BY_DIM, classical_energies
from src.ea_glass.models import (
    LatticeGroundState,
    LatticeInstance,
    SelfAveragingReport,
    SpinConfiguration,
)
from src.utils.exceptions import DomainError, SizeError, UnsupportedOperationError

logger = logging.getLogger(__name__)

ENUMERATION_CHUNK = 2**16


def random_lattice(
    d: int, L: int, dist: DistributionSpec, seed: RealizationSeed, periodic: bool = True
) -> LatticeInstance:
    """Решетка с независимыми связями закона dist"""
    couplings = draw(dist, seed.generator(), (L**d, d))
    return LatticeInstance(d, L, periodic, couplings)


def gauge_transform(lattice: LatticeInstance, site: int) -> LatticeInstance:
    """σ_site → −σ_site вместе с J → −J на всех связях, инцидентных узлу"""
    if not 0 <= site < lattice.n_sites:
        raise DomainError(f"Узел {site} вне решетки")
    couplings = lattice.couplings.copy()
    sources, targets, _ = lattice.bonds()
    _, axes = np.nonzero(lattice.bond_mask)
    incident = (sources == site) | (targets == site)
    couplings[sources[incident], axes[incident]] *= -1
    return LatticeInstance(lattice.d, lattice.L, lattice.periodic, couplings)


def _check_enumerable(lattice: LatticeInstance) -> None:
    if lattice.n_sites > Config.ENUMERATION_SITE_CAP:
        raise SizeError(
            f"Перебор 2^{lattice.n_sites} конфигураций превышает лимит "
            f"{Config.ENUMERATION_SITE_CAP} узлов",
            details={"sites": lattice.n_sites},
        )


def _configuration_energies(lattice: LatticeInstance):
    """Энергии Σ J σσ по блокам конфигураций с σ_0 = +1"""
    sources, targets, values = lattice.bonds()
    n = lattice.n_sites
    shifts = np.arange(n)
    for start in range(0, 2 ** (n - 1), ENUMERATION_CHUNK):
        index = np.arange(start, min(start + ENUMERATION_CHUNK, 2 ** (n - 1)))[:, None]
        spins = 1 - 2 * ((index << 1 >> shifts) & 1)
        yield index[:, 0], (spins[:, sources] * spins[:, targets]) @ values


def finite_lattice_ground_state(lattice: LatticeInstance) -> LatticeGroundState:
    """E_Λ = min_σ Σ J σ_iσ_j точным перебором; per_site = E_Λ/|Λ|"""
    _check_enumerable(lattice)
    best, best_index = math.inf, 0
    for index, energies in _configuration_energies(lattice):
        k = int(np.argmin(energies))
        if energies[k] < best:
            best, best_index = float(energies[k]), int(index[k])
    minimizer = SpinConfiguration.from_index(best_index << 1, lattice.n_sites)
    return LatticeGroundState(best, best / lattice.n_sites, minimizer)


def cluster_decomposition_bound(lattice: LatticeInstance) -> float:
    """
    c_d·Σ_n E_0(кластер в n): нижняя граница E_Λ для периодической решетки

    Каждый узел n задает кластер с началом в n; связь (узел, ось) входит
    ровно в 1/c_d кластеров.
    """
    if not lattice.periodic:
        raise UnsupportedOperationError("Разложение на кластеры требует периодических условий")
    geometry = GEOMETRY_BY_DIM[lattice.d]
    offsets = geometry.offsets
    lower = [i for i, _ in geometry.bonds]
    axes = geometry.bond_axes
    coordinates = lattice.coordinates

    patterns = np.empty((lattice.n_sites, geometry.n_bonds))
    for n, origin in enumerate(coordinates):
        for b, (site, axis) in enumerate(zip(lower, axes)):
            patterns[n, b] = lattice.couplings[lattice.site_index(origin + offsets[site]), axis]
    minima = classical_energies(geometry, patterns).min(axis=1)
    return CLUSTER_WEIGHTS[lattice.d] * float(minima.sum())


@dataclass(frozen=True)
class LatticeEnergyEstimator:
    """E_Λ/|Λ| для одной реализации связей"""

    d: int
    L: int
    dist: DistributionSpec
    periodic: bool = True

    def __call__(self, rng: np.random.Generator) -> float:
        lattice = LatticeInstance(
            self.d, self.L, self.periodic, draw(self.dist, rng, (self.L**self.d, self.d))
        )
        return finite_lattice_ground_state(lattice).per_site


def lattice_energy_average(
    d: int,
    L: int,
    dist: DistributionSpec,
    n_samples: int,
    seed: RealizationSeed,
    periodic: bool = True,
    n_workers: Optional[int] = None,
) -> MonteCarloEstimate:
    """Av(E_Λ)/|Λ| по реализациям"""
    estimator = LatticeEnergyEstimator(d, L, dist, periodic)
    if L**d > Config.ENUMERATION_SITE_CAP:
        raise SizeError(f"Решетка {L}^{d} слишком велика для перебора")
    estimate = average(estimator, n_samples, seed, n_workers)
    logger.info(f"Av(E_Λ)/|Λ| для {L}^{d} ({'периодич.' if periodic else 'свободн.'}): {estimate.mean:.5f}")
    return estimate


def free_energy_per_site(lattice: LatticeInstance, temperature: float) -> float:
    """f = −T·log Z/|Λ|, Z = Σ_σ exp(−Σ J σσ/T) полным перебором"""
    temperature = require(validator.validate_positive("temperature", temperature))
    _check_enumerable(lattice)
    partial = [
        special.logsumexp(-energies / temperature)
        for _, energies in _configuration_energies(lattice)
    ]
    # множитель 2 за глобальный переворот спинов
    log_z = math.log(2.0) + float(special.logsumexp(partial))
    return -temperature * log_z / lattice.n_sites


def _log_one_plus_tanh_product(beta_j: np.ndarray) -> float:
    """
    log(1 + Π(−tanh βJ)) без потери точности при Π|tanh| → 1

    При фрустрированном кольце и низкой T разность 1 − Π|tanh| считается
    через −log|tanh x| = 2·atanh(e^{−2|x|}) в логарифмах.
    """
    sign = np.prod(-np.sign(beta_j))
    damping = np.exp(-2.0 * np.abs(beta_j))
    with np.errstate(divide="ignore"):
        log_ratio = float(np.sum(np.log1p(-damping) - np.log1p(damping)))
    ratio = math.exp(log_ratio)
    if sign > 0:
        return math.log1p(ratio)
    if ratio < 0.5:
        return math.log1p(-ratio)
    # здесь все e^{−2|x|} ≤ 1/3, atanh конечен
    tiny = damping < 1e-8
    safe = np.where(tiny, 0.5, damping)
    log_terms = math.log(2.0) - 2.0 * np.abs(beta_j) + np.where(
        tiny, 0.0, np.log(np.arctanh(safe) / safe)
    )
    log_gap = float(special.logsumexp(log_terms))
    gap = math.exp(log_gap)
    if gap == 0.0:
        return log_gap
    return math.log(-math.expm1(-gap))


def chain_free_energy(couplings, temperature: float, periodic: bool = True) -> float:
    """
    Свободная энергия на узел цепочки Σ J_i σ_iσ_{i+1}

    Матрицы переноса коммутируют (общие собственные векторы (1, ±1)), поэтому
    для периодической цепочки Z = Π 2cosh(J/T) + Π(−2sinh(J/T)); для
    открытой Z = 2·Π 2cosh(J/T) по n−1 связям.
    """
    temperature = require(validator.validate_positive("temperature", temperature))
    beta_j = np.asarray(couplings, dtype=float).ravel() / temperature
    if beta_j.size < 1:
        raise DomainError("Цепочка должна содержать хотя бы одну связь")
    log_cosh = np.sum(np.logaddexp(beta_j, -beta_j))
    if periodic:
        n_sites = beta_j.size
        log_z = log_cosh + _log_one_plus_tanh_product(beta_j)
    else:
        n_sites = beta_j.size + 1
        log_z = math.log(2.0) + log_cosh
    return -temperature * float(log_z) / n_sites


@dataclass(frozen=True)
class ChainFreeEnergy:
    """f_n(J) периодической цепочки из n узлов"""

    dist: DistributionSpec
    n_sites: int
    temperature: float

    def __call__(self, rng: np.random.Generator) -> float:
        return chain_free_energy(draw(self.dist, rng, self.n_sites), self.temperature)


def self_averaging_variance(
    sizes: Iterable[int],
    dist: DistributionSpec,
    temperature: float,
    n_realizations: int,
    seed: RealizationSeed,
    n_workers: Optional[int] = None,
) -> SelfAveragingReport:
    """Среднее и дисперсия f_n(J) по реализациям; самоусреднение видно как убывание дисперсии"""
    sizes = tuple(int(n) for n in sizes)
    require(validator.validate_integer_at_least("n_realizations", n_realizations, 2))
    means, variances = [], []
    for index, n in enumerate(sizes):
        values = evaluate_realizations(
            ChainFreeEnergy(dist, n, temperature),
            n_realizations,
            RealizationSeed(seed.master_seed, seed.realization_index + index),
            n_workers,
        )
        means.append(float(np.mean(values)))
        variances.append(float(np.var(values, ddof=1)))
    report = SelfAveragingReport(
        sizes=sizes,
        temperature=float(temperature),
        means=np.array(means),
        variances=np.array(variances),
        n_realizations=int(n_realizations),
        metadata={"distribution": dist.kind.value, "scale": dist.scale},
    )
    logger.info(f"Дисперсия f_n по n={sizes}: {np.round(report.variances, 8).tolist()}")
    return report


def stability_constant(bonds_per_site: float, dist: DistributionSpec, temperature: float) -> float:
    """
    Строгая граница f ≥ −c: Z ≤ 2^N·exp(Σ|J|/T) дает
    c = (связей на узел)·sup|J| + T·log 2
    """
    if not dist.is_bounded:
        raise UnsupportedOperationError(
            "Граница устойчивости по реализациям требует ограниченного закона",
            details={"kind": dist.kind.value},
        )
    temperature = require(validator.validate_positive("temperature", temperature))
    return float(bonds_per_site) * dist.sup_abs + temperature * math.log(2.0)
