"""
Модели данных для решеточных операторов
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Optional, Tuple

import numpy as np
import scipy.linalg
from scipy import sparse

from config import Config
from src.core.validation import require, validator
from src.disorder import DistributionSpec, RealizationSeed
from src.utils.exceptions import DomainError, SizeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SparseJacobiSpec:
    """
    Разреженная модель Якоби: свободная цепочка с барьерами высоты v
    в точках a_j^ω = a_j + ω_j, где a_j − a_{j−1} = β^j, a_1 = β − 1,
    ω_j равномерно на {−j, …, j}. Граничное условие
    u_{−1}·cos φ − u_0·sin φ = 0.
    """

    beta: int
    v: float
    n_max: int
    phi: float
    seed: RealizationSeed

    def __post_init__(self) -> None:
        require(validator.validate_integer_at_least("beta", self.beta, 2))
        require(validator.validate_positive("v", self.v, strict=False))
        require(validator.validate_integer_at_least("n_max", self.n_max, 2))
        require(validator.validate_range("phi", self.phi, 0.0, math.pi, closed=False))

    def with_size(self, n_max: int) -> "SparseJacobiSpec":
        return SparseJacobiSpec(self.beta, self.v, n_max, self.phi, self.seed)

    def with_seed(self, seed: RealizationSeed) -> "SparseJacobiSpec":
        return SparseJacobiSpec(self.beta, self.v, self.n_max, self.phi, seed)


@dataclass(frozen=True)
class AndersonSpec:
    """Модель Андерсона H = Δ + v·V на кубе со стороной L в Z^d"""

    dim: int
    box_side: int
    disorder: DistributionSpec
    v: float
    seed: RealizationSeed
    periodic: bool = False

    def __post_init__(self) -> None:
        require(validator.validate_integer_at_least("dim", self.dim, 1))
        require(validator.validate_integer_at_least("box_side", self.box_side, 2))
        require(validator.validate_positive("v", self.v, strict=False))


@dataclass(frozen=True)
class AlmostMathieuSpec:
    """Почти-Матье: диагональ λ·cos(2π(ωn + θ))"""

    lam: float
    omega: float
    theta: float
    n_max: int

    def __post_init__(self) -> None:
        require(validator.validate_positive("lambda", self.lam, strict=False))
        require(validator.validate_finite("omega", self.omega))
        require(validator.validate_finite("theta", self.theta))
        require(validator.validate_integer_at_least("n_max", self.n_max, 2), SizeError)


@dataclass(frozen=True)
class KroneckerSumSpec:
    """J_θ = J¹ ⊗ I + θ·I ⊗ J² с независимыми реализациями ω¹, ω²"""

    spec_a: SparseJacobiSpec
    spec_b: SparseJacobiSpec
    theta: float

    def __post_init__(self) -> None:
        require(validator.validate_range("theta", self.theta, 0.0, 1.0))


class EnergyZone(str, Enum):
    """Зона энергии по критерию (β−1)(4−λ²) ≷ v²"""

    SC_ZONE = "sc_zone"
    PP_ZONE = "pp_zone"
    EDGE = "edge"


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """
    Конечная эрмитова матрица усеченного гамильтониана.

    matrix хранится в CSR; для трехдиагональных операторов дополнительно
    хранятся диагональ и наддиагональ, что позволяет использовать
    eigh_tridiagonal. coordinates[i] дает координату узла i на решетке.
    """

    matrix: sparse.csr_matrix
    coordinates: np.ndarray
    kind: str
    diagonal: Optional[np.ndarray] = None
    off_diagonal: Optional[np.ndarray] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dense(cls, matrix, kind: str = "dense") -> "OperatorMatrix":
        """Оператор из плотной эрмитовой матрицы; узлы нумеруются 0..n−1"""
        dense = np.atleast_2d(np.asarray(matrix))
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise DomainError(f"Ожидалась квадратная матрица, получено {dense.shape}")
        if not np.allclose(dense, dense.conj().T, rtol=0.0, atol=1e-12):
            raise DomainError("Матрица не эрмитова")
        return cls(
            matrix=sparse.csr_matrix(dense),
            coordinates=np.arange(dense.shape[0]).reshape(-1, 1),
            kind=kind,
        )

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_tridiagonal(self) -> bool:
        return self.diagonal is not None and self.off_diagonal is not None

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def is_hermitian(self) -> bool:
        """Точная (поэлементная) эрмитовость"""
        difference = self.matrix - self.matrix.conj().T
        return difference.count_nonzero() == 0 if sparse.issparse(difference) else False

    def bandwidth(self) -> int:
        coo = self.matrix.tocoo()
        if coo.nnz == 0:
            return 0
        return int(np.max(np.abs(coo.row - coo.col)))

    @cached_property
    def eigensystem(self) -> Tuple[np.ndarray, np.ndarray]:
        """Полное спектральное разложение (собственные значения по возрастанию)"""
        if self.is_tridiagonal:
            values, vectors = scipy.linalg.eigh_tridiagonal(self.diagonal, self.off_diagonal)
        else:
            if self.dimension > Config.DENSE_DIMENSION_CAP:
                raise SizeError(
                    f"Плотная диагонализация размерности {self.dimension} превышает лимит "
                    f"{Config.DENSE_DIMENSION_CAP}",
                    details={"dimension": self.dimension},
                )
            values, vectors = scipy.linalg.eigh(self.to_dense())
        logger.debug(f"Диагонализован оператор {self.kind} размерности {self.dimension}")
        return values, vectors

    def eigenvalues(self) -> np.ndarray:
        if self.is_tridiagonal and "eigensystem" not in self.__dict__:
            return scipy.linalg.eigvalsh_tridiagonal(self.diagonal, self.off_diagonal)
        return self.eigensystem[0]

    def site_index(self, coordinate) -> int:
        """Индекс узла по координате"""
        target = np.atleast_1d(np.asarray(coordinate))
        matches = np.flatnonzero(np.all(self.coordinates == target, axis=1))
        if matches.size == 0:
            raise DomainError(f"Узел {coordinate} вне решетки")
        return int(matches[0])


@dataclass(frozen=True)
class MobilityEdges:
    """λ± = ±√(4 − v²/(β−1)); пустое множество при v ≥ 2√(β−1)"""

    beta: int
    v: float
    critical_v: float
    lower: Optional[float]
    upper: Optional[float]

    @property
    def is_empty(self) -> bool:
        return self.lower is None


@dataclass(frozen=True)
class TransferProduct:
    """Упорядоченное произведение одноузельных матриц переноса"""

    matrix: np.ndarray
    log_scale: float
    start: int
    stop: int
    barrier_sites: Tuple[int, ...]
    barrier_log_norms: Tuple[float, ...]

    @property
    def log_norm(self) -> float:
        return float(np.log(np.linalg.norm(self.matrix, 2)) + self.log_scale)


@dataclass(frozen=True)
class ZoneClassification:
    """Конечнообъемная классификация энергий разреженной модели"""

    energies: np.ndarray
    mean_log_growth: np.ndarray
    std_error: np.ndarray
    threshold: float
    measured: Tuple[EnergyZone, ...]
    predicted: Tuple[EnergyZone, ...]
    n_realizations: int
    barriers_per_realization: float

    @property
    def agreement(self) -> np.ndarray:
        return np.array(
            [
                m == p or p is EnergyZone.EDGE
                for m, p in zip(self.measured, self.predicted)
            ]
        )

    @property
    def agreement_fraction(self) -> float:
        return float(np.mean(self.agreement))
