"""
Модели данных для спектральных мер
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from config import Config
from src.utils.exceptions import DomainError, SizeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpectralMeasureApprox:
    """
    Конечная атомарная мера Σ w_k δ(x − x_k).

    Позиции сортируются по возрастанию при создании. Если все позиции
    являются целыми кратными lattice_step, усреднения по Чезаро считаются
    через автокорреляцию весов на решетке.
    """

    positions: np.ndarray
    weights: np.ndarray
    lattice_step: Optional[float] = None
    label: str = ""

    def __post_init__(self) -> None:
        positions = np.asarray(self.positions, dtype=float).ravel()
        weights = np.asarray(self.weights, dtype=float).ravel()
        if positions.size != weights.size:
            raise DomainError("Число позиций и весов атомов не совпадает")
        if positions.size == 0:
            raise DomainError("Мера должна содержать хотя бы один атом")
        if not (np.all(np.isfinite(positions)) and np.all(np.isfinite(weights))):
            raise DomainError("Позиции и веса атомов должны быть конечными")
        if np.any(weights < 0):
            raise DomainError("Веса атомов должны быть неотрицательны")
        order = np.argsort(positions, kind="stable")
        object.__setattr__(self, "positions", positions[order])
        object.__setattr__(self, "weights", weights[order])

    @property
    def n_atoms(self) -> int:
        return int(self.positions.size)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def atoms(self) -> Tuple[Tuple[float, float], ...]:
        return tuple(zip(self.positions.tolist(), self.weights.tolist()))

    def merged(self) -> "SpectralMeasureApprox":
        """Объединяет атомы с точно совпадающими позициями"""
        unique, inverse = np.unique(self.positions, return_inverse=True)
        if unique.size == self.positions.size:
            return self
        weights = np.bincount(inverse, weights=self.weights, minlength=unique.size)
        return SpectralMeasureApprox(unique, weights, self.lattice_step, self.label)

    def normalized(self) -> "SpectralMeasureApprox":
        return SpectralMeasureApprox(
            self.positions, self.weights / self.total_mass, self.lattice_step, self.label
        )


def point_mass(position: float = 0.0, weight: float = 1.0) -> SpectralMeasureApprox:
    return SpectralMeasureApprox(np.array([position]), np.array([weight]), label="point_mass")


def uniform_density(
    n_atoms: int, low: float = -1.0, high: float = 1.0, total_mass: float = 1.0
) -> SpectralMeasureApprox:
    """Дискретизация равномерной плотности: атомы в серединах n_atoms ячеек"""
    if n_atoms < 1 or not high > low:
        raise DomainError("Нужны n_atoms >= 1 и high > low")
    step = (high - low) / n_atoms
    positions = low + step * (np.arange(n_atoms) + 0.5)
    weights = np.full(n_atoms, total_mass / n_atoms)
    # Разности позиций кратны step
    return SpectralMeasureApprox(positions, weights, lattice_step=step, label="uniform_density")


def cantor_measure(depth: Optional[int] = None) -> SpectralMeasureApprox:
    """
    Канторова мера глубины depth на [0, 1]: 2^depth атомов
    Σ_{j≤depth} 2ε_j/3^j с весами 2^−depth
    """
    depth = Config.CANTOR_DEPTH if depth is None else int(depth)
    if depth < 1:
        raise DomainError("depth должен быть >= 1")
    if depth > 24:
        raise SizeError(f"Глубина {depth} дает слишком много атомов", details={"depth": depth})
    digits = np.zeros(1, dtype=np.int64)
    for _ in range(depth):
        digits = np.concatenate([3 * digits, 3 * digits + 2])
    step = 3.0**-depth
    positions = digits * step
    weights = np.full(digits.size, 0.5**depth)
    return SpectralMeasureApprox(positions, weights, lattice_step=step, label=f"cantor_{depth}")


def from_eigensystem(
    values: np.ndarray, vectors: np.ndarray, psi
) -> SpectralMeasureApprox:
    """
    Спектральная мера вектора ψ: атомы в собственных значениях
    с весами |⟨v_k, ψ⟩|². Целое psi означает δ-вектор на узле psi.
    """
    values = np.asarray(values, dtype=float)
    vectors = np.asarray(vectors)
    if isinstance(psi, (int, np.integer)):
        if not 0 <= psi < vectors.shape[0]:
            raise DomainError(f"Узел {psi} вне размерности {vectors.shape[0]}")
        amplitudes = vectors[int(psi), :]
    else:
        psi = np.asarray(psi)
        if psi.shape != (vectors.shape[0],):
            raise DomainError("Размерность вектора не совпадает с оператором")
        amplitudes = vectors.conj().T @ psi
    return SpectralMeasureApprox(values, np.abs(amplitudes) ** 2, label="eigensystem")


def product_measure(
    mu: SpectralMeasureApprox, nu: SpectralMeasureApprox, theta: float
) -> SpectralMeasureApprox:
    """Мера суммы Кронекера: атомы x_i + θ·y_j с весами w_i·u_j"""
    n_atoms = mu.n_atoms * nu.n_atoms
    if n_atoms > Config.KRONECKER_MAX_DIMENSION:
        raise SizeError(
            f"Произведение мер содержит {n_atoms} атомов, лимит "
            f"{Config.KRONECKER_MAX_DIMENSION}",
            details={"atoms": n_atoms},
        )
    positions = (mu.positions[:, None] + theta * nu.positions[None, :]).ravel()
    weights = (mu.weights[:, None] * nu.weights[None, :]).ravel()
    return SpectralMeasureApprox(positions, weights, label="product").merged()


@dataclass(frozen=True)
class HolderReport:
    """Константа равномерной α-гельдеровости по масштабам сканирования"""

    alpha: float
    constant: float
    grid_scale: float
    scales: Tuple[float, ...] = ()
    per_scale_constants: Tuple[float, ...] = ()
    growth_factor: float = 1.0
    bounded: bool = True


@dataclass(frozen=True)
class CesaroFit:
    """Подгонка ⟨|μ̂|²⟩_T ~ T^{−α}"""

    alpha: float
    intercept: float
    r_squared: float
    times: np.ndarray = field(repr=False)
    averages: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class RajchmanReport:
    """
    Супремумы |μ̂| по хвостовым окнам. Вердикт является эвристикой
    конечного масштаба, а не утверждением о пределе.
    """

    window_starts: Tuple[float, ...]
    tail_sups: Tuple[float, ...]
    decay_ratio: float
    verdict: str
    heuristic: bool = True


@dataclass(frozen=True)
class L2GrowthVerdict:
    """∫_0^T |μ̂|² dt при удвоении T: ограниченность указывает на а.н. меру"""

    times: Tuple[float, ...]
    integrals: Tuple[float, ...]
    last_ratio: float
    absolutely_continuous: bool


def measure_mass_in(measure: SpectralMeasureApprox, low: float, high: float) -> float:
    lo = np.searchsorted(measure.positions, low, side="left")
    hi = np.searchsorted(measure.positions, high, side="right")
    return float(np.sum(measure.weights[lo:hi]))

