"""
Модели данных для модели Андерсона на дереве Бете
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from src.core.validation import require, validator
from src.disorder import DistributionSpec
from src.utils.exceptions import ConvergenceError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BetheModelSpec:
    """
    H_λ = −A + λV на дереве с ветвлением K: у каждой вершины, кроме
    корня, K+1 соседей. Потенциал V независим в вершинах с законом disorder.
    """

    K: int
    lam: float
    disorder: DistributionSpec = field(default_factory=DistributionSpec.uniform)
    kappa: float = 0.5

    def __post_init__(self) -> None:
        require(validator.validate_integer_at_least("K", self.K, 2))
        require(validator.validate_positive("lambda", self.lam, strict=False))
        require(validator.validate_range("kappa", self.kappa, 0.0, 1.0, closed=False))

    @property
    def delta_K(self) -> float:
        """Порог слабого беспорядка (√K − 1)²/2"""
        return (math.sqrt(self.K) - 1.0) ** 2 / 2.0

    @property
    def spectral_edge(self) -> float:
        """2√K + λ·sup|V|; для неограниченного закона берется 3λ·scale"""
        sup = self.disorder.sup_abs
        if not math.isfinite(sup):
            sup = 3.0 * self.disorder.scale
        return 2.0 * math.sqrt(self.K) + self.lam * sup


@dataclass(frozen=True, eq=False)
class TreeGreenEnsemble:
    """Популяция значений полостной функции Грина g(ζ) поддерева"""

    pool: np.ndarray
    zeta: complex
    generation: int = 0

    def __post_init__(self) -> None:
        if complex(self.zeta).imag <= 0:
            raise DomainError(f"Требуется Im ζ > 0, получено ζ = {self.zeta}")
        pool = np.asarray(self.pool, dtype=complex).ravel()
        if pool.size == 0:
            raise DomainError("Популяция пуста")
        if np.any(pool.imag <= 0):
            raise ConvergenceError(
                "Нарушено свойство Герглотца: Im g ≤ 0",
                details={"generation": self.generation, "zeta": str(self.zeta)},
            )
        object.__setattr__(self, "pool", pool)
        object.__setattr__(self, "zeta", complex(self.zeta))

    @property
    def size(self) -> int:
        return int(self.pool.size)

    @property
    def mean(self) -> complex:
        return complex(np.mean(self.pool))


@dataclass(frozen=True, eq=False)
class RootGreenStats:
    """Выборка G(0,0;ζ) в корне и производные статистики"""

    zeta: complex
    samples: np.ndarray
    root_degree: int
    generations: int
    threshold: float
    im_positive_fraction: float
    density: float
    mean_density: float

    @property
    def mean(self) -> complex:
        return complex(np.mean(self.samples))


@dataclass(frozen=True)
class LyapunovEstimate:
    """−Av log|G(0,0;E+iη)| по сетке η, экстраполяция к η = 0 и наклон по пути"""

    energy: float
    etas: Tuple[float, ...]
    per_eta: Tuple[float, ...]
    per_eta_error: Tuple[float, ...]
    extrapolated: float
    path_slope: float

    @property
    def relative_gap(self) -> float:
        return abs(self.extrapolated - self.path_slope) / max(abs(self.extrapolated), 1e-300)


@dataclass(frozen=True, eq=False)
class FreeEnergyEstimate:
    """φ(s;ζ): наклон log Av|G(0,x)|^s по |x|"""

    s: float
    energy: float
    eta: float
    phi: float
    std_error: float
    depths: np.ndarray
    log_moments: np.ndarray
    effective_sample_size: float
    tail_dominated: bool


@dataclass(frozen=True)
class CriteriaReport:
    """
    Критерии протяженных состояний в двух ориентациях и доля Im G > порога
    """

    K: int
    lam: float
    energy: float
    eta: float
    lyapunov: float
    phi_one: float
    log_K: float
    delta_K: float
    lyapunov_exceeds_log_k: bool
    free_energy_below_log_k: bool
    lyapunov_below_log_k: bool
    free_energy_above_log_k: bool
    im_positive_fraction: float
    in_ac_region: bool

    def to_dict(self) -> Dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class NegativeMomentProbe:
    """Av((Im G)^{−3−δ}) при размерах популяции P и 2P"""

    energy: float
    eta: float
    delta: float
    pool_sizes: Tuple[int, int]
    values: Tuple[float, float]
    relative_change: float
    stable: bool


@dataclass(frozen=True)
class InequalityCheck:
    """Сравнение φ(s;ζ) с границами −(s/2)log K, −s·log K и −s·L"""

    s: float
    energy: float
    eta: float
    phi: float
    std_error: float
    half_slope_bound: float
    full_slope_bound: float
    convexity_bound: float
    half_slope_holds: bool
    full_slope_margin: float
    convexity_holds: bool


@dataclass(frozen=True, eq=False)
class TreeTransport:
    """
    Профиль P̂_{δ_0,η} по сферам |x| = r, масса внутри |x| < b/η и
    нормированный профиль K^{|x|}·Av|G(0,x;E+iη)|²
    """

    eta: float
    energy: float
    radii: np.ndarray
    sphere_mass: np.ndarray
    normalized_profile: np.ndarray
    b_values: np.ndarray
    inner_mass: np.ndarray
    total_mass: float
    slope_bound: float
