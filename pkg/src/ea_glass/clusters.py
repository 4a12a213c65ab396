"""
Кластеры: полный перебор основных состояний, квантовые кластеры,
калибровочные орбиты и нижние границы c_d·E_0^{(d)}
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Optional

import numpy as np
import scipy.linalg

from src.disorder import DistributionKind, DistributionSpec, RealizationSeed, average, draw
from src.ea_glass.models import (
    BoundReport,
    ClusterAverage,
    ClusterGeometry,
    ClusterGroundState,
    ClusterInstance,
    SpinConfiguration,
)
from src.utils.exceptions import DomainError, SizeError, UnsupportedOperationError

logger = logging.getLogger(__name__)

# c_d: каждая связь Z^d лежит в 2 плакетах (d=2) или в 4 кубах (d=3)
CLUSTER_WEIGHTS = {2: 0.5, 3: 0.25}
GEOMETRY_BY_DIM = {2: ClusterGeometry.PLAQUETTE, 3: ClusterGeometry.CUBE}
MAX_EXHAUSTIVE_PATTERNS = 2**16
MAX_QUANTUM_SITES = 8

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@lru_cache(maxsize=None)
def spin_table(n_sites: int) -> np.ndarray:
    """Все конфигурации с σ_0 = +1: массив (2^{n−1}, n)"""
    index = np.arange(2 ** (n_sites - 1))[:, None]
    bits = (index << 1 >> np.arange(n_sites)) & 1
    return (1 - 2 * bits).astype(np.int8)


@lru_cache(maxsize=None)
def bond_products(geometry: ClusterGeometry) -> np.ndarray:
    """σ_iσ_j по связям кластера для всех конфигураций с σ_0 = +1"""
    spins = spin_table(geometry.n_sites)
    i, j = np.array(geometry.bonds).T
    return (spins[:, i] * spins[:, j]).astype(float)


def frustration_indicator(couplings) -> int:
    """G_P = Π sign(J) по связям плакета"""
    couplings = np.asarray(couplings, dtype=float).ravel()
    if couplings.size != 4:
        raise DomainError(f"Плакет имеет 4 связи, получено {couplings.size}")
    if np.any(couplings == 0):
        raise DomainError("Нулевая связь: знак плакета не определен")
    return int(np.prod(np.sign(couplings)))


def classical_energies(geometry: ClusterGeometry, couplings: np.ndarray) -> np.ndarray:
    """F(σ, J) = Σ J_ij σ_iσ_j; couplings формы (bonds,) или (patterns, bonds)"""
    return np.asarray(couplings, dtype=float) @ bond_products(geometry).T


def _site_operator(pauli: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    factors = [pauli if k == site else np.eye(2) for k in range(n_sites)]
    return reduce(np.kron, factors)


def quantum_cluster_hamiltonian(cluster: ClusterInstance) -> np.ndarray:
    """Σ J_ij (α_x σ^xσ^x + α_y σ^yσ^y + α_z σ^zσ^z), плотная матрица 2^n × 2^n"""
    n = cluster.geometry.n_sites
    if n > MAX_QUANTUM_SITES:
        raise SizeError(f"Квантовый кластер из {n} узлов слишком велик")
    ops = {
        axis: [_site_operator(PAULI[axis], k, n) for k in range(n)] for axis in ("x", "y", "z")
    }
    hamiltonian = np.zeros((2**n, 2**n), dtype=complex)
    for (i, j), coupling in zip(cluster.geometry.bonds, cluster.couplings):
        for axis, alpha in zip(("x", "y", "z"), cluster.anisotropy):
            if alpha != 0.0:
                hamiltonian += coupling * alpha * ops[axis][i] @ ops[axis][j]
    return hamiltonian


def gauge_rotation_operator(n_sites: int, site: int) -> np.ndarray:
    """Поворот на π вокруг оси y в узле: σ^x → −σ^x, σ^z → −σ^z"""
    if not 0 <= site < n_sites:
        raise DomainError(f"Узел {site} вне кластера")
    return _site_operator(PAULI["y"], site, n_sites)


def cluster_gauge_transform(cluster: ClusterInstance, site: int) -> ClusterInstance:
    """Смена знака всех связей, инцидентных узлу кластера"""
    if not 0 <= site < cluster.geometry.n_sites:
        raise DomainError(f"Узел {site} вне кластера")
    couplings = cluster.couplings.copy()
    for index, (i, j) in enumerate(cluster.geometry.bonds):
        if site in (i, j):
            couplings[index] = -couplings[index]
    return ClusterInstance(cluster.geometry, couplings, cluster.anisotropy)


def quantum_ground_energy(cluster: ClusterInstance) -> float:
    """Наименьшее собственное значение квантового кластера"""
    values = scipy.linalg.eigvalsh(quantum_cluster_hamiltonian(cluster))
    return float(values[0])


def cluster_ground_state(cluster: ClusterInstance) -> ClusterGroundState:
    """
    Классический режим: минимум Σ J σσ перебором 2^{n−1} конфигураций
    (σ_0 = +1, глобальный переворот дает вторую копию каждого минимизатора),
    все минимизаторы возвращаются. Квантовый режим: плотная диагонализация.
    """
    if not cluster.is_classical:
        return ClusterGroundState(energy=quantum_ground_energy(cluster))
    energies = cluster.anisotropy[2] * classical_energies(cluster.geometry, cluster.couplings)
    minimum = float(energies.min())
    spins = spin_table(cluster.geometry.n_sites)
    winners = np.flatnonzero(np.isclose(energies, minimum, rtol=0.0, atol=1e-12))
    return ClusterGroundState(
        energy=minimum,
        minimizers=tuple(SpinConfiguration(spins[k]) for k in winners),
    )


def gauge_orbits(geometry: ClusterGeometry) -> int:
    """Число калибровочных орбит знаковых конфигураций связей"""
    geometry = ClusterGeometry(geometry)
    site_masks = []
    for site in range(geometry.n_sites):
        mask = 0
        for index, (i, j) in enumerate(geometry.bonds):
            if site in (i, j):
                mask |= 1 << index
        site_masks.append(mask)
    group = {0}
    for mask in site_masks:
        group |= {element ^ mask for element in group}

    seen = np.zeros(2**geometry.n_bonds, dtype=bool)
    orbits = 0
    for pattern in range(seen.size):
        if seen[pattern]:
            continue
        orbits += 1
        for element in group:
            seen[pattern ^ element] = True
    logger.debug(f"{geometry.value}: {orbits} орбит, калибровочная группа порядка {len(group)}")
    return orbits


def _finite_support(dist: DistributionSpec):
    if dist.kind is DistributionKind.BERNOULLI:
        return np.array([-dist.scale, dist.scale]), np.array([0.5, 0.5])
    if dist.kind is DistributionKind.TABULATED and dist.probabilities:
        return np.asarray(dist.values), np.asarray(dist.probabilities)
    raise UnsupportedOperationError(
        f"Полный перебор невозможен для закона {dist.kind.value}",
        details={"kind": dist.kind.value},
    )


@dataclass(frozen=True)
class ClusterEnergyEstimator:
    """E_0 кластера для одной реализации связей (оценщик для движка усреднения)"""

    geometry: ClusterGeometry
    dist: DistributionSpec

    def __call__(self, rng: np.random.Generator) -> float:
        couplings = draw(self.dist, rng, self.geometry.n_bonds)
        return float(classical_energies(self.geometry, couplings).min())


def average_cluster_energy(
    geometry: ClusterGeometry,
    dist: DistributionSpec,
    mode: str = "exhaustive",
    seed: Optional[RealizationSeed] = None,
    n_samples: int = 10_000,
    n_workers: Optional[int] = None,
) -> ClusterAverage:
    """
    E_0^{(d)} = Av(E_0(J)) по кластеру

    Args:
        mode: exhaustive (точное среднее по всем конфигурациям конечного
            закона) или mc (Монте-Карло со стандартной ошибкой)
    """
    geometry = ClusterGeometry(geometry)
    if mode == "exhaustive":
        values, probabilities = _finite_support(dist)
        n_patterns = values.size**geometry.n_bonds
        if n_patterns > MAX_EXHAUSTIVE_PATTERNS:
            raise SizeError(
                f"{n_patterns} конфигураций связей превышают лимит перебора",
                details={"patterns": n_patterns},
            )
        choice = np.array(list(itertools.product(range(values.size), repeat=geometry.n_bonds)))
        minima = classical_energies(geometry, values[choice]).min(axis=1)
        weights = np.prod(probabilities[choice], axis=1)
        checksum = float(minima.sum())
        result = ClusterAverage(
            geometry=geometry,
            value=float(np.dot(weights, minima)),
            std_error=0.0,
            n_patterns=int(n_patterns),
            mode=mode,
            oracle_checksum=checksum,
        )
    elif mode == "mc":
        seed = seed if seed is not None else RealizationSeed(0)
        estimate = average(ClusterEnergyEstimator(geometry, dist), n_samples, seed, n_workers)
        result = ClusterAverage(
            geometry=geometry,
            value=float(estimate.mean),
            std_error=float(estimate.std_error),
            n_patterns=n_samples,
            mode=mode,
        )
    else:
        raise DomainError(f"Неизвестный режим усреднения: {mode!r}")
    logger.info(
        f"E_0 кластера {geometry.value} ({mode}): {result.value:.6f} по {result.n_patterns} конфигурациям"
    )
    return result


def lower_bound_e(
    d: int,
    dist: DistributionSpec,
    mode: str = "exhaustive",
    seed: Optional[RealizationSeed] = None,
    n_samples: int = 10_000,
    n_workers: Optional[int] = None,
) -> BoundReport:
    """Граница e^{(d)} ≥ c_d·E_0^{(d)} с c_2 = 1/2, c_3 = 1/4"""
    if d not in CLUSTER_WEIGHTS:
        raise UnsupportedOperationError(f"Граница кластеров поддерживается для d ∈ {{2, 3}}, получено {d}")
    cluster = average_cluster_energy(GEOMETRY_BY_DIM[d], dist, mode, seed, n_samples, n_workers)
    c_d = CLUSTER_WEIGHTS[d]
    return BoundReport(
        d=d,
        bound=c_d * cluster.value,
        average=cluster.value,
        c_d=c_d,
        n_patterns=cluster.n_patterns,
        mode=mode,
        std_error=c_d * cluster.std_error,
        oracle_checksum=cluster.oracle_checksum,
    )


def ideal_energy_per_site(d: int, scale: float = 1.0) -> float:
    """Энергия на узел нефрустрированной системы с |J| = scale: все d связей узла удовлетворены"""
    return -float(d) * scale


def misfit(e0_per_site: float, e_ideal_per_site: float) -> float:
    """m = (|E^id| − |E_0|)/|E^id|"""
    if e_ideal_per_site == 0 or not math.isfinite(e_ideal_per_site):
        raise DomainError("Энергия идеальной системы должна быть конечной и ненулевой")
    return (abs(e_ideal_per_site) - abs(e0_per_site)) / abs(e_ideal_per_site)
