"""
Спектральные меры: преобразование Фурье-Стилтьеса, усреднения по Чезаро,
гельдеровость и канторовы эталоны
"""

from src.spectral_measures.io import read_measure_csv, write_measure_csv
from src.spectral_measures.models import (
    CesaroFit,
    HolderReport,
    L2GrowthVerdict,
    RajchmanReport,
    SpectralMeasureApprox,
    cantor_measure,
    from_eigensystem,
    measure_mass_in,
    point_mass,
    product_measure,
    uniform_density,
)
from src.spectral_measures.transforms import (
    cantor_fs,
    cesaro_average,
    cesaro_decay,
    fs_transform,
    holder_constant,
    l2_growth_verdict,
    rajchman_test,
)

__all__ = [
    "CesaroFit",
    "HolderReport",
    "L2GrowthVerdict",
    "RajchmanReport",
    "SpectralMeasureApprox",
    "cantor_fs",
    "cantor_measure",
    "cesaro_average",
    "cesaro_decay",
    "from_eigensystem",
    "fs_transform",
    "holder_constant",
    "l2_growth_verdict",
    "measure_mass_in",
    "point_mass",
    "product_measure",
    "rajchman_test",
    "read_measure_csv",
    "uniform_density",
    "write_measure_csv",
]
