"""
Схемы параметров экспериментов (pydantic)
"""

import logging
import math
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional, Tuple, Type

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from config import Config
from src.disorder import DistributionSpec
from src.utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

RANDOM_LAWS = ("bernoulli", "uniform", "gaussian")
GOLDEN_OMEGA = (math.sqrt(5) - 1) / 2


def _split(value: Any) -> Any:
    """Список из строки "a, b, c" (так значения приходят из key = value файла)"""
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class ExperimentParams(BaseModel):
    """Базовая схема: неизвестные ключи запрещены"""

    model_config = ConfigDict(extra="forbid", frozen=True)


class DistributionParams(ExperimentParams):
    distribution: str = "bernoulli"
    scale: float = Field(1.0, gt=0)

    @field_validator("distribution")
    @classmethod
    def known_distribution(cls, value: str) -> str:
        value = value.strip().lower()
        if value not in RANDOM_LAWS:
            raise ValueError(f"неизвестный закон {value!r}, допустимы: {', '.join(RANDOM_LAWS)}")
        return value

    def law(self) -> DistributionSpec:
        return DistributionSpec(self.distribution, self.scale)


class MobilityEdgesParams(ExperimentParams):
    beta: int = Field(2, ge=2)
    v: float = Field(1.0, gt=0)
    n_energies: int = Field(81, ge=3)


class JacobiSpectrumParams(ExperimentParams):
    beta: int = Field(2, ge=2)
    v: float = Field(1.0, ge=0)
    n_max: int = Field(10_000, ge=10)
    phi: float = Field(0.7, gt=0, lt=math.pi)
    n_realizations: int = Field(64, ge=1)
    n_energies: int = Field(41, ge=1)


class KroneckerParams(ExperimentParams):
    beta: int = Field(2, ge=2)
    v: float = Field(1.0, ge=0)
    phi: float = Field(0.7, gt=0, lt=math.pi)
    n_a: int = Field(200, ge=2)
    n_b: int = Field(200, ge=2)
    theta: float = Field(0.5, ge=0, le=1)


class CantorParams(ExperimentParams):
    depth: int = Field(12, ge=1, le=24)
    t_max: float = Field(1e4, gt=0)
    n_times: int = Field(2048, ge=16)
    n_windows: int = Field(8, ge=2)


class CesaroParams(ExperimentParams):
    measure: Literal["cantor", "uniform", "point"] = "cantor"
    depth: int = Field(12, ge=1, le=24)
    n_atoms: int = Field(2000, ge=2)
    t_min: float = Field(1.0, gt=0)
    t_max: float = Field(1e4, gt=0)
    n_times: int = Field(25, ge=3)


class AndersonParams(DistributionParams):
    dim: int = Field(1, ge=1, le=3)
    box_side: int = Field(401, ge=3)
    v: float = Field(0.0, ge=0)


class AndersonMomentsParams(AndersonParams):
    m: float = Field(2.0, gt=0)
    t_max: float = Field(100.0, gt=0)
    n_times: int = Field(201, ge=8)


class SojournParams(AndersonParams):
    box_side: int = Field(201, ge=3)
    radius: int = Field(0, ge=0)
    t_max: float = Field(100.0, gt=0)


class TransportParams(AndersonParams):
    beta_exp: float = Field(2.0, gt=0)
    eta_min: float = Field(0.01, gt=0)
    eta_max: float = Field(0.1, gt=0)
    n_etas: int = Field(6, ge=2)
    b: float = Field(1.0, gt=0)


class BetheParams(DistributionParams):
    distribution: str = "uniform"
    K: int = Field(2, ge=2)
    lam: float = Field(0.0, ge=0)
    energy: float = 0.0
    pool_size: Optional[int] = Field(None, ge=1000)
    generations: Optional[int] = Field(None, ge=1)


class BetheGreenParams(BetheParams):
    eta: float = Field(0.01, gt=0)
    root_degree: Optional[int] = Field(None, ge=1)


class BetheCriteriaParams(BetheParams):
    etas: Tuple[float, ...] = (0.1, 0.01, 0.001)

    @field_validator("etas", mode="before")
    @classmethod
    def split_etas(cls, value: Any) -> Any:
        return _split(value)


class BetheTransportParams(BetheParams):
    eta: float = Field(0.2, gt=0)
    radius_cap: Optional[int] = Field(None, ge=1)
    n_paths: int = Field(1000, ge=10)
    n_energies: int = Field(128, ge=8)


class EaBoundParams(DistributionParams):
    d: int = Field(3, ge=2, le=3)
    mode: Literal["exhaustive", "mc"] = "exhaustive"
    n_samples: int = Field(10_000, ge=2)


class EaLatticeParams(DistributionParams):
    d: int = Field(2, ge=2, le=3)
    L: int = Field(4, ge=2)
    periodic: bool = True
    n_samples: int = Field(100, ge=2)


class EaFreeEnergyParams(DistributionParams):
    sizes: Tuple[int, ...] = (8, 16, 32, 64)
    temperature: float = Field(1.0, gt=0)
    n_realizations: int = Field(200, ge=2)

    @field_validator("sizes", mode="before")
    @classmethod
    def split_sizes(cls, value: Any) -> Any:
        return _split(value)


class EmchDecayParams(DistributionParams):
    d: int = Field(2, ge=1)
    beta: float = Field(1.0, gt=0)
    gamma: float = 1.0
    t_max: float = Field(50.0, gt=0)
    n_times: int = Field(2001, ge=101)
    samples: int = Field(2000, ge=1000)


class AlmostMathieuParams(ExperimentParams):
    lambdas: Tuple[float, ...] = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0)
    n_max: int = Field(1000, ge=10)
    omega: float = Field(GOLDEN_OMEGA, gt=0, lt=1)
    theta: float = 0.0
    n_energies: int = Field(20, ge=2)

    @field_validator("lambdas", mode="before")
    @classmethod
    def split_lambdas(cls, value: Any) -> Any:
        return _split(value)


class ExperimentConfig(BaseModel):
    """Полностью разрешенная конфигурация запуска; целиком попадает в отчет"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    experiment: str
    params: ExperimentParams
    master_seed: int = Field(default_factory=lambda: Config.DEFAULT_MASTER_SEED, ge=0, lt=2**64)
    n_workers: int = Field(default_factory=lambda: Config.DEFAULT_WORKERS, ge=1)
    output: Path = Field(default_factory=lambda: Path(Config.OUTPUT_DIR))

    def resolved(self) -> Dict[str, Any]:
        return {
            "experiment": self.experiment,
            "params": self.params.model_dump(),
            "master_seed": self.master_seed,
            "n_workers": self.n_workers,
            "output": str(self.output),
        }


def _diagnostics(error: ValidationError) -> list:
    return [
        {"field": ".".join(str(part) for part in item["loc"]) or "<root>", "message": item["msg"]}
        for item in error.errors()
    ]


def validate_params(
    experiment: str, schema: Type[ExperimentParams], raw: Mapping[str, Any]
) -> ExperimentParams:
    """Проверка блока параметров; ошибки собираются по полям в ConfigurationError"""
    try:
        return schema(**dict(raw))
    except ValidationError as e:
        problems = _diagnostics(e)
        summary = "; ".join(f"{p['field']}: {p['message']}" for p in problems)
        logger.debug(f"Схема {schema.__name__} отклонила параметры: {summary}")
        raise ConfigurationError(
            f"Некорректные параметры эксперимента {experiment}: {summary}",
            details={"errors": problems},
            experiment=experiment,
        )


def build_config(experiment: str, params: ExperimentParams, **options: Any) -> ExperimentConfig:
    """ExperimentConfig с проверкой master_seed/n_workers/output"""
    options = {key: value for key, value in options.items() if value is not None}
    try:
        return ExperimentConfig(experiment=experiment, params=params, **options)
    except ValidationError as e:
        problems = _diagnostics(e)
        summary = "; ".join(f"{p['field']}: {p['message']}" for p in problems)
        raise ConfigurationError(
            f"Некорректные параметры запуска {experiment}: {summary}",
            details={"errors": problems},
            experiment=experiment,
        )
