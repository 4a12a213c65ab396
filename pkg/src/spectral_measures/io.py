"""
Импорт/экспорт мер в CSV (position, weight)
"""

import logging

from src.core.serialization import PathLike, read_csv, write_csv
from src.spectral_measures.models import SpectralMeasureApprox
from src.utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

MEASURE_COLUMNS = ("position", "weight")


def write_measure_csv(measure: SpectralMeasureApprox, path: PathLike):
    return write_csv(path, {"position": measure.positions, "weight": measure.weights})


def read_measure_csv(path: PathLike, label: str = "") -> SpectralMeasureApprox:
    df = read_csv(path)
    missing = [column for column in MEASURE_COLUMNS if column not in df.columns]
    if missing:
        raise ConfigurationError(
            f"В файле меры {path} нет колонок: {', '.join(missing)}", details={"path": str(path)}
        )
    logger.debug(f"Прочитана мера из {path}: {len(df)} атомов")
    return SpectralMeasureApprox(
        df["position"].to_numpy(dtype=float), df["weight"].to_numpy(dtype=float), label=label
    )
