"""
Экспорт операторов в текстовый формат триплетов

Формат: строки заголовка "# key = value" (параметры модели и зерно),
затем строка "# row col value" и по одной ненулевой позиции на строку.
Для комплексных матриц value записывается как "re im".
"""

import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np
from scipy import sparse

from src.core.serialization import PathLike, write_csv
from src.lattice_operators.models import OperatorMatrix
from src.spectral_measures import SpectralMeasureApprox
from src.utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

COLUMNS_LINE = "# row col value"


def export_triplets(
    op: OperatorMatrix, path: PathLike, header: Optional[Mapping[str, Any]] = None
) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fields = {"kind": op.kind, "dimension": op.dimension, **op.metadata, **(header or {})}
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    is_complex = np.iscomplexobj(coo.data)
    with open(target, "w", encoding="utf-8") as f:
        for key in sorted(fields):
            f.write(f"# {key} = {fields[key]}\n")
        f.write(COLUMNS_LINE + "\n")
        for k in order:
            value = coo.data[k]
            if is_complex:
                f.write(f"{coo.row[k]} {coo.col[k]} {value.real!r} {value.imag!r}\n")
            else:
                f.write(f"{coo.row[k]} {coo.col[k]} {float(value)!r}\n")
    logger.info(f"Оператор {op.kind} экспортирован: {target} ({coo.nnz} ненулевых)")
    return target


def read_triplets(path: PathLike) -> Tuple[Dict[str, str], sparse.csr_matrix]:
    """Обратное чтение: (заголовок, CSR-матрица)"""
    header: Dict[str, str] = {}
    rows, cols, values = [], [], []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "=" in line:
                    key, _, value = line[1:].partition("=")
                    header[key.strip()] = value.strip()
                continue
            parts = line.split()
            if len(parts) not in (3, 4):
                raise ConfigurationError(f"Некорректная строка триплета: {line!r}")
            rows.append(int(parts[0]))
            cols.append(int(parts[1]))
            values.append(
                complex(float(parts[2]), float(parts[3])) if len(parts) == 4 else float(parts[2])
            )
    if "dimension" not in header:
        raise ConfigurationError(f"В файле {path} нет размерности в заголовке")
    dimension = int(header["dimension"])
    matrix = sparse.coo_matrix((values, (rows, cols)), shape=(dimension, dimension)).tocsr()
    return header, matrix


def export_spectrum_csv(measure: SpectralMeasureApprox, path: PathLike) -> Path:
    """Спектральные данные: CSV (eigenvalue, weight)"""
    return write_csv(path, {"eigenvalue": measure.positions, "weight": measure.weights})
