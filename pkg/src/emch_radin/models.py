"""
Модели данных для динамики возврата к равновесию (модель Эмха-Радина)
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from src.core.validation import require, validator
from src.disorder import DistributionSpec
from src.utils.exceptions import DomainError

logger = logging.getLogger(__name__)

Offset = Tuple[int, ...]
# Допуск на |g(t)| ≤ 1 и g(0) = 1
CURVE_TOLERANCE = 1e-12


def unit_offsets(d: int):
    """2d единичных смещений ±e_i"""
    for axis in range(d):
        for sign in (1, -1):
            offset = [0] * d
            offset[axis] = sign
            yield tuple(offset)


@dataclass(frozen=True)
class EmchRadinSpec:
    """
    Гамильтониан Σ_{i<k} ε(i−k)·J_{ik}·σ^z_iσ^z_k с независимыми связями J
    закона disorder (None: нерандомизированный случай J ≡ 1) и начальным
    состоянием ⊗ exp(−γσ^x_j)/tr.

    profile хранит ε(k) на смещениях k ≠ 0 (обе стороны ±k явно);
    tail_square_sum = Σ ε(k)² по отброшенным при усечении смещениям.
    """

    d: int
    beta_coupling: float
    profile: Dict[Offset, float]
    disorder: Optional[DistributionSpec] = None
    gamma: float = 1.0
    tail_square_sum: float = 0.0
    label: str = "custom"

    def __post_init__(self) -> None:
        require(validator.validate_integer_at_least("d", self.d, 1))
        require(validator.validate_finite("gamma", self.gamma))
        require(validator.validate_positive("tail_square_sum", self.tail_square_sum, strict=False))
        profile = {}
        for offset, value in dict(self.profile).items():
            offset = tuple(int(k) for k in offset)
            if len(offset) != self.d:
                raise DomainError(f"Смещение {offset} не лежит в Z^{self.d}")
            value = float(value)
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"ε{offset} должна быть конечной и >= 0, получено {value}")
            if not any(offset):
                if value != 0.0:
                    raise DomainError("ε(0) должна равняться 0")
                continue
            if value > 0:
                profile[offset] = value
        object.__setattr__(self, "profile", profile)

    @classmethod
    def nearest_neighbor(
        cls,
        d: int,
        beta_coupling: float,
        disorder: Optional[DistributionSpec] = None,
        gamma: float = 1.0,
    ) -> "EmchRadinSpec":
        """ε(k) = β на 2d единичных смещениях"""
        beta = require(validator.validate_positive("beta_coupling", beta_coupling))
        profile = {offset: beta for offset in unit_offsets(d)}
        return cls(d, beta, profile, disorder, gamma, label="nearest_neighbor")

    @classmethod
    def halving_chain(
        cls,
        cutoff: int = 60,
        disorder: Optional[DistributionSpec] = None,
        gamma: float = 1.0,
    ) -> "EmchRadinSpec":
        """Бесконечный радиус в d = 1: ε(|n|) = 2^{−|n|−1}, усечение |n| ≤ cutoff"""
        cutoff = require(validator.validate_integer_at_least("cutoff", cutoff, 1))
        profile = {}
        for n in range(1, cutoff + 1):
            profile[(n,)] = profile[(-n,)] = 2.0 ** (-n - 1)
        # 2·Σ_{n>cutoff} 4^{−n−1}
        tail = (8.0 / 3.0) * 4.0 ** (-cutoff - 2)
        return cls(1, 0.5, profile, disorder, gamma, tail_square_sum=tail, label="halving")

    @property
    def coordination(self) -> int:
        """Число ненулевых связей узла (z = 2d для ближайших соседей)"""
        return len(self.profile)

    @property
    def epsilons(self) -> np.ndarray:
        return np.array(list(self.profile.values()), dtype=float)

    @property
    def is_nonrandom(self) -> bool:
        return self.disorder is None

    @property
    def bounded_couplings(self) -> bool:
        return self.disorder is None or self.disorder.is_bounded

    def stability(self) -> Dict[str, object]:
        """Класс профиля и флаги устойчивости по свойствам модели"""
        l1 = math.isfinite(float(np.sum(self.epsilons)))
        return {
            "profile_class": "l1" if l1 else "l2",
            "first_kind": self.bounded_couplings,
            "second_kind": l1 and self.bounded_couplings,
        }


@dataclass(frozen=True, eq=False)
class DecayCurve:
    """g(t) = Av(℘₀(t)) на сетке; f(t) = δ·g(t)"""

    times: np.ndarray
    values: np.ndarray
    delta: float
    std_error: Optional[np.ndarray] = None
    label: str = ""
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise DomainError("Сетка и значения кривой должны быть одномерными одной длины")
        if np.any(np.abs(values) > 1.0 + CURVE_TOLERANCE):
            raise DomainError("Нарушено |g(t)| ≤ 1")
        at_zero = values[times == 0]
        if at_zero.size and np.any(np.abs(at_zero - 1.0) > CURVE_TOLERANCE):
            raise DomainError("Нарушено g(0) = 1")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if self.std_error is not None:
            object.__setattr__(self, "std_error", np.asarray(self.std_error, dtype=float))

    @property
    def f(self) -> np.ndarray:
        return self.delta * self.values


class DecayKind(str, Enum):
    """Вердикт по огибающей g(t)"""

    ALMOST_PERIODIC = "no_decay_almost_periodic"
    POWER_LAW = "power_law"
    GAUSSIAN_LIKE = "gaussian_like"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class EnvelopeVerdict:
    kind: DecayKind
    recurrence: float
    exponent: Optional[float]
    power_r2: Optional[float]
    gaussian_r2: Optional[float]
    gaussian_rate: Optional[float]
    n_envelope_points: int
