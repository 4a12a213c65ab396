"""
Модели данных для квантовой динамики
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from src.utils.exceptions import DomainError

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class StateVector:
    """Нормированное состояние на узлах решетки"""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amplitudes = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amplitudes.size == 0 or not np.all(np.isfinite(amplitudes)):
            raise DomainError("Амплитуды состояния должны быть конечными и непустыми")
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise DomainError(
                f"Состояние не нормировано: ‖ψ‖ = {norm}", details={"norm": norm}
            )
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def delta(cls, dimension: int, site: int) -> "StateVector":
        """δ_x на узле с индексом site"""
        if not 0 <= site < dimension:
            raise DomainError(f"Узел {site} вне размерности {dimension}")
        amplitudes = np.zeros(dimension, dtype=complex)
        amplitudes[site] = 1.0
        return cls(amplitudes)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = True) -> "StateVector":
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if normalize:
            norm = np.linalg.norm(amplitudes)
            if norm == 0:
                raise DomainError("Нулевой вектор нельзя нормировать")
            amplitudes = amplitudes / norm
        return cls(amplitudes)

    @property
    def dimension(self) -> int:
        return int(self.amplitudes.size)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class TransportSeries:
    """
    Ряд наблюдаемой по времени (или по η): значения и, для временных
    рядов, средние по Чезаро ⟨·⟩_T на той же сетке.
    """

    times: np.ndarray
    values: np.ndarray
    observable: str
    time_averages: Optional[np.ndarray] = None
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise DomainError("Сетка и значения ряда должны быть одномерными одной длины")
        if np.any(np.diff(times) <= 0):
            raise DomainError("Сетка ряда должна строго возрастать")
        if not np.all(np.isfinite(values)):
            raise DomainError(f"Ряд {self.observable} содержит нечисловые значения")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if self.time_averages is not None:
            object.__setattr__(self, "time_averages", np.asarray(self.time_averages, dtype=float))

    def to_columns(self) -> Dict[str, np.ndarray]:
        columns = {"t": self.times, self.observable: self.values}
        if self.time_averages is not None:
            columns[f"{self.observable}_avg"] = self.time_averages
        return columns


@dataclass(frozen=True)
class SojournResult:
    """J(S;ψ) на [−T, T] и признак линейного роста"""

    value: float
    t_max: float
    half_value: float
    growth_ratio: float
    linear_growth: bool


@dataclass(frozen=True)
class ExponentReport:
    """Оценки β_m^− ≤ β_m^+ по наклонам в последних диадических окнах"""

    m: float
    lower: float
    upper: float
    window_slopes: Tuple[float, ...]
    windows: Tuple[Tuple[float, float], ...]
    clipped: bool


@dataclass(frozen=True, eq=False)
class ResolventTransport:
    """P̂_{ψ,η}(x): временная и энергетическая стороны тождества Планшереля"""

    eta: float
    sites: np.ndarray
    time_side: np.ndarray
    energy_side: np.ndarray
    closed_form: np.ndarray

    @property
    def difference(self) -> float:
        return float(np.max(np.abs(self.time_side - self.energy_side)))

    def at(self, site: int) -> Tuple[float, float]:
        index = int(np.flatnonzero(self.sites == site)[0])
        return float(self.time_side[index]), float(self.energy_side[index])


@dataclass(frozen=True, eq=False)
class TransportProfile:
    """M̂_ψ(β, η) по сетке η, подгонка M̂ ~ η^{−rβ} и масса внутри |x| < b/η"""

    etas: np.ndarray
    moments: np.ndarray
    beta_exp: float
    fitted_r: float
    inner_mass: np.ndarray
    ballistic_margin: np.ndarray
