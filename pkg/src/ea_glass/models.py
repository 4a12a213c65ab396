"""
Модели данных для модели Эдвардса-Андерсона
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.utils.exceptions import DomainError

logger = logging.getLogger(__name__)


class ClusterGeometry(str, Enum):
    """
    Кластеры разложения: плакет (4 узла, 4 связи) и куб (8 узлов, 12 связей)

    Узел кластера задается смещением от начала; связь (i, j) всегда идет
    от узла с меньшей координатой по оси связи к большему.
    """

    PLAQUETTE = "plaquette"
    CUBE = "cube"

    @property
    def dim(self) -> int:
        return 2 if self is ClusterGeometry.PLAQUETTE else 3

    @property
    def offsets(self) -> np.ndarray:
        if self is ClusterGeometry.PLAQUETTE:
            return np.array([(0, 0), (1, 0), (1, 1), (0, 1)])
        # индекс узла куба x + 2y + 4z
        return np.array([(i & 1, (i >> 1) & 1, (i >> 2) & 1) for i in range(8)])

    @property
    def bonds(self) -> Tuple[Tuple[int, int], ...]:
        if self is ClusterGeometry.PLAQUETTE:
            return ((0, 1), (1, 2), (3, 2), (0, 3))
        # канонический порядок: по осям x, y, z, внутри оси по возрастанию узла
        return tuple(
            (i, i + (1 << axis)) for axis in range(3) for i in range(8) if not (i >> axis) & 1
        )

    @property
    def n_sites(self) -> int:
        return len(self.offsets)

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)

    @property
    def bond_axes(self) -> np.ndarray:
        offsets = self.offsets
        return np.array([int(np.argmax(offsets[j] - offsets[i])) for i, j in self.bonds])


@dataclass(frozen=True, eq=False)
class ClusterInstance:
    """Кластер со связями J и анизотропией (α_x, α_y, α_z)"""

    geometry: ClusterGeometry
    couplings: np.ndarray
    anisotropy: Tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "geometry", ClusterGeometry(self.geometry))
        couplings = np.asarray(self.couplings, dtype=float).ravel()
        if couplings.size != self.geometry.n_bonds:
            raise DomainError(
                f"{self.geometry.value}: ожидалось {self.geometry.n_bonds} связей, "
                f"получено {couplings.size}"
            )
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "anisotropy", tuple(float(a) for a in self.anisotropy))
        if len(self.anisotropy) != 3:
            raise DomainError("Анизотропия задается тремя числами (α_x, α_y, α_z)")

    @property
    def is_classical(self) -> bool:
        return self.anisotropy[0] == 0.0 and self.anisotropy[1] == 0.0


@dataclass(frozen=True, eq=False)
class SpinConfiguration:
    """Конфигурация изинговских спинов σ_i = ±1"""

    spins: np.ndarray

    def __post_init__(self) -> None:
        spins = np.asarray(self.spins, dtype=np.int8).ravel()
        if not np.all(np.abs(spins) == 1):
            raise DomainError("Спины должны принимать значения ±1")
        object.__setattr__(self, "spins", spins)

    @classmethod
    def from_index(cls, index: int, n_sites: int) -> "SpinConfiguration":
        """Бит k индекса задает σ_k = −1"""
        bits = (int(index) >> np.arange(n_sites)) & 1
        return cls(1 - 2 * bits)

    def __len__(self) -> int:
        return int(self.spins.size)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SpinConfiguration) and np.array_equal(self.spins, other.spins)

    def __hash__(self) -> int:
        return hash(self.spins.tobytes())


@dataclass(frozen=True, eq=False)
class LatticeInstance:
    """
    Решетка Z^d со стороной L. Связь (узел, ось) соединяет узел с соседом
    в направлении +e_ось; при свободных граничных условиях связи,
    выходящие за край, отсутствуют и хранят 0. При L = 2 и периодических
    условиях пара соседей соединена двумя связями.
    """

    d: int
    L: int
    periodic: bool
    couplings: np.ndarray

    def __post_init__(self) -> None:
        if self.d not in (2, 3):
            raise DomainError(f"Поддерживаются d ∈ {{2, 3}}, получено {self.d}")
        if self.L < 2:
            raise DomainError("Сторона решетки должна быть >= 2")
        couplings = np.array(self.couplings, dtype=float)
        if couplings.shape != (self.n_sites, self.d):
            raise DomainError(
                f"Ожидался массив связей {(self.n_sites, self.d)}, получено {couplings.shape}"
            )
        couplings[~self.bond_mask] = 0.0
        object.__setattr__(self, "couplings", couplings)

    @property
    def n_sites(self) -> int:
        return self.L**self.d

    @property
    def coordinates(self) -> np.ndarray:
        grids = np.meshgrid(*[np.arange(self.L)] * self.d, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def site_index(self, coordinate) -> int:
        coordinate = np.mod(np.asarray(coordinate), self.L)
        return int(np.ravel_multi_index(tuple(coordinate), (self.L,) * self.d))

    def neighbor(self, site: int, axis: int) -> int:
        coordinate = np.array(np.unravel_index(site, (self.L,) * self.d))
        coordinate[axis] += 1
        return self.site_index(coordinate)

    @property
    def bond_mask(self) -> np.ndarray:
        """Присутствующие связи (узел, ось)"""
        if self.periodic:
            return np.ones((self.n_sites, self.d), dtype=bool)
        return self.coordinates < self.L - 1

    def bonds(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(узлы i, узлы j, J_ij) по присутствующим связям"""
        sites, axes = np.nonzero(self.bond_mask)
        neighbors = np.array([self.neighbor(s, a) for s, a in zip(sites, axes)], dtype=int)
        return sites, neighbors, self.couplings[sites, axes]

    @property
    def n_bonds(self) -> int:
        return int(self.bond_mask.sum())


@dataclass(frozen=True)
class ClusterGroundState:
    """Основное состояние кластера; минимизаторы только в классическом режиме (σ_0 = +1)"""

    energy: float
    minimizers: Optional[Tuple[SpinConfiguration, ...]] = None


@dataclass(frozen=True)
class ClusterAverage:
    """E_0^{(d)} = Av(E_0 кластера): точное среднее или Монте-Карло"""

    geometry: ClusterGeometry
    value: float
    std_error: float
    n_patterns: int
    mode: str
    oracle_checksum: Optional[float] = None


@dataclass(frozen=True)
class BoundReport:
    """Нижняя граница c_d·E_0^{(d)} для энергии основного состояния на узел"""

    d: int
    bound: float
    average: float
    c_d: float
    n_patterns: int
    mode: str
    std_error: float = 0.0
    oracle_checksum: Optional[float] = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class LatticeGroundState:
    energy: float
    per_site: float
    minimizer: SpinConfiguration


@dataclass(frozen=True, eq=False)
class SelfAveragingReport:
    """Среднее и дисперсия f_n(J) по реализациям для набора n"""

    sizes: Tuple[int, ...]
    temperature: float
    means: np.ndarray
    variances: np.ndarray
    n_realizations: int
    metadata: dict = field(default_factory=dict)

    @property
    def variance_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.variances) < 0))
