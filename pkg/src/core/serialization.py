"""
Сериализация результатов: JSON-отчеты и CSV-таблицы
"""

import dataclasses
import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Sequence, Union

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Формат, при котором повторный запуск дает побайтно одинаковый CSV
CSV_FLOAT_FORMAT = "%.17g"


def to_jsonable(value: Any) -> Any:
    """Рекурсивно приводит dataclass/numpy/complex/Enum к JSON-совместимому виду"""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            field.name: to_jsonable(getattr(value, field.name))
            for field in dataclasses.fields(value)
            if field.repr
        }
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Mapping):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": to_jsonable(value.real), "im": to_jsonable(value.imag)}
    if isinstance(value, (np.floating, float)):
        number = float(value)
        # JSON не поддерживает inf/nan
        return number if math.isfinite(number) else str(number)
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(path: PathLike, payload: Any) -> Path:
    """Записывает отчет в JSON"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8") as f:
        json.dump(to_jsonable(payload), f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")
    logger.debug(f"JSON сохранен: {target}")
    return target


def read_json(path: PathLike) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_csv(path: PathLike, columns: Mapping[str, Sequence[Any]]) -> Path:
    """
    Записывает таблицу с фиксированным порядком колонок

    Args:
        path: Путь к файлу
        columns: Имя колонки -> значения (одинаковой длины)
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame({name: np.asarray(values) for name, values in columns.items()})
    df.to_csv(target, index=False, float_format=CSV_FLOAT_FORMAT, encoding="utf-8")
    logger.debug(f"CSV сохранен: {target} ({len(df)} строк)")
    return target


def read_csv(path: PathLike) -> pd.DataFrame:
    return pd.read_csv(path, encoding="utf-8")
