"""
Простые оценщики для движка усреднения (сериализуемые pickle)
"""

from dataclasses import dataclass

import numpy as np

from src.disorder.models import DistributionSpec
from src.disorder.sampling import draw


@dataclass(frozen=True)
class ConstantEstimator:
    value: float

    def __call__(self, rng: np.random.Generator) -> float:
        return self.value


@dataclass(frozen=True)
class CouplingPower:
    """J^power для одной свежей связи"""

    dist: DistributionSpec
    power: int = 2

    def __call__(self, rng: np.random.Generator) -> float:
        return float(draw(self.dist, rng, 1)[0] ** self.power)


@dataclass(frozen=True)
class SampleMean:
    """Эмпирическое среднее count связей одной реализации"""

    dist: DistributionSpec
    count: int

    def __call__(self, rng: np.random.Generator) -> float:
        return float(np.mean(draw(self.dist, rng, self.count)))
