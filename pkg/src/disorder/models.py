"""
Модели данных для беспорядка
Законы распределения связей/потенциала, зерна реализаций и оценки Монте-Карло
"""

import io
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from dotenv import dotenv_values

from src.utils.exceptions import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

MAX_SEED = 2**64


class DistributionKind(str, Enum):
    """Тип закона распределения"""

    BERNOULLI = "bernoulli"
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"
    TABULATED = "tabulated"

    @classmethod
    def parse(cls, value: Union[str, "DistributionKind"]) -> "DistributionKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            known = ", ".join(kind.value for kind in cls)
            raise ConfigurationError(
                f"Неизвестный тип распределения: {value!r} (допустимо: {known})",
                details={"kind": str(value)},
            )


@dataclass(frozen=True)
class DistributionSpec:
    """
    Закон распределения случайной связи J или потенциала V.

    bernoulli: ±scale с вероятностью 1/2;
    uniform: плотность 1/(2·scale) на [−scale, scale];
    gaussian: плотность (1/(scale·√π))·exp(−x²/scale²), дисперсия scale²/2;
    tabulated: конечный набор значений; без вероятностей это эмпирическая
    выборка с равными весами и без аналитических моментов.
    """

    kind: DistributionKind
    scale: float = 1.0
    moment_constant: Optional[float] = None
    values: Tuple[float, ...] = ()
    probabilities: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", DistributionKind.parse(self.kind))
        try:
            scale = float(self.scale)
        except (TypeError, ValueError):
            raise ConfigurationError(f"scale должен быть числом, получено {self.scale!r}")
        if not math.isfinite(scale) or scale <= 0:
            raise ConfigurationError(f"scale должен быть конечным и > 0, получено {self.scale}")
        object.__setattr__(self, "scale", scale)
        if self.moment_constant is not None and self.moment_constant <= 0:
            raise ConfigurationError("moment_constant должен быть > 0")

        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "probabilities", tuple(float(p) for p in self.probabilities))
        if self.kind is DistributionKind.TABULATED:
            if not self.values:
                raise ConfigurationError("Табулированный закон требует непустой список значений")
            if self.probabilities:
                if len(self.probabilities) != len(self.values):
                    raise ConfigurationError("Число вероятностей не совпадает с числом значений")
                if min(self.probabilities) < 0 or abs(sum(self.probabilities) - 1.0) > 1e-12:
                    raise ConfigurationError("Вероятности должны быть неотрицательны и в сумме 1")
        elif self.values or self.probabilities:
            raise ConfigurationError(f"Закон {self.kind.value} не принимает табличные значения")

    @classmethod
    def bernoulli(cls, scale: float = 1.0) -> "DistributionSpec":
        return cls(DistributionKind.BERNOULLI, scale)

    @classmethod
    def uniform(cls, scale: float = 1.0) -> "DistributionSpec":
        return cls(DistributionKind.UNIFORM, scale)

    @classmethod
    def gaussian(cls, scale: float = 1.0) -> "DistributionSpec":
        return cls(DistributionKind.GAUSSIAN, scale)

    @classmethod
    def tabulated(cls, values, probabilities=None) -> "DistributionSpec":
        return cls(
            DistributionKind.TABULATED,
            values=tuple(values),
            probabilities=tuple(probabilities) if probabilities is not None else (),
        )

    @classmethod
    def point_mass(cls, value: float) -> "DistributionSpec":
        """Вырожденный закон: J = value с вероятностью 1"""
        return cls.tabulated((value,), (1.0,))

    @property
    def has_analytic_moments(self) -> bool:
        return self.kind is not DistributionKind.TABULATED or bool(self.probabilities)

    @property
    def is_bounded(self) -> bool:
        return self.kind is not DistributionKind.GAUSSIAN

    @property
    def sup_abs(self) -> float:
        """Точная верхняя грань |J| на носителе"""
        if self.kind is DistributionKind.GAUSSIAN:
            return math.inf
        if self.kind is DistributionKind.TABULATED:
            return max(abs(v) for v in self.values)
        return float(self.scale)

    def to_config(self, master_seed: Optional[int] = None) -> str:
        """Сериализация в блок key = value"""
        lines = [f"kind = {self.kind.value}", f"scale = {self.scale!r}"]
        if self.moment_constant is not None:
            lines.append(f"moment_constant = {self.moment_constant!r}")
        if self.values:
            lines.append("values = " + ",".join(repr(v) for v in self.values))
        if self.probabilities:
            lines.append("probabilities = " + ",".join(repr(p) for p in self.probabilities))
        if master_seed is not None:
            lines.append(f"master_seed = {int(master_seed)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_config(cls, text: str) -> Tuple["DistributionSpec", Optional[int]]:
        """
        Разбор блока key = value (тот же формат, что и файлы конфигурации)

        Returns:
            (закон, master_seed или None)
        """
        raw = dotenv_values(stream=io.StringIO(text))
        if "kind" not in raw or not raw["kind"]:
            raise ConfigurationError("В блоке распределения отсутствует ключ kind")
        try:
            scale = float(raw.get("scale") or 1.0)
            moment_constant = (
                float(raw["moment_constant"]) if raw.get("moment_constant") else None
            )
            values = _parse_floats(raw.get("values"))
            probabilities = _parse_floats(raw.get("probabilities"))
            master_seed = int(raw["master_seed"]) if raw.get("master_seed") else None
        except ValueError as e:
            raise ConfigurationError(f"Некорректное числовое значение в блоке распределения: {e}")
        spec = cls(raw["kind"], scale, moment_constant, values, probabilities)
        return spec, master_seed


def _parse_floats(text: Optional[str]) -> Tuple[float, ...]:
    if not text:
        return ()
    return tuple(float(item) for item in text.split(",") if item.strip())


@dataclass(frozen=True)
class RealizationSeed:
    """
    Зерно реализации: поток чисел является чистой функцией
    (master_seed, realization_index, подключи).
    """

    master_seed: int
    realization_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= int(self.master_seed) < MAX_SEED:
            raise DomainError(f"master_seed должен лежать в [0, 2^64), получено {self.master_seed}")
        if int(self.realization_index) < 0:
            raise DomainError("realization_index должен быть >= 0")

    def sequence(self, *subkeys: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(
            entropy=int(self.master_seed),
            spawn_key=(int(self.realization_index),) + tuple(int(k) for k in subkeys),
        )

    def generator(self, *subkeys: int) -> np.random.Generator:
        """Генератор на счетчиковом битовом генераторе Philox"""
        return np.random.Generator(np.random.Philox(self.sequence(*subkeys)))

    def child(self, index: int) -> "RealizationSeed":
        return RealizationSeed(self.master_seed, index)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Оценка среднего по реализациям (скалярная или покомпонентная)"""

    mean: Union[float, np.ndarray]
    std_error: Union[float, np.ndarray]
    n_samples: int
    samples: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_samples < 1:
            raise DomainError("n_samples должен быть >= 1")
        if np.any(np.asarray(self.std_error) < 0):
            raise DomainError("std_error не может быть отрицательной")

    def within(self, target, n_sigma: float = 3.0, floor: float = 0.0) -> bool:
        """|mean − target| ≤ n_sigma·std_error + floor во всех компонентах"""
        deviation = np.abs(np.asarray(self.mean) - np.asarray(target))
        return bool(np.all(deviation <= n_sigma * np.asarray(self.std_error) + floor))


@dataclass(frozen=True)
class MomentBoundReport:
    """Моменты Av(J^n) и наименьшая допустимая константа c в |Av(J^n)| ≤ n!·c^n"""

    orders: Tuple[int, ...]
    moments: Tuple[float, ...]
    per_order_constants: Tuple[float, ...]
    least_constant: float
    declared_constant: Optional[float]
    violation: bool
