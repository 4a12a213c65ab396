"""
Модель суммы Кронекера J_θ = J¹ ⊗ I + θ·I ⊗ J²
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import sparse

from config import Config
from src.lattice_operators.builders import build_sparse_jacobi
from src.lattice_operators.models import KroneckerSumSpec, OperatorMatrix
from src.spectral_measures import SpectralMeasureApprox, from_eigensystem, product_measure
from src.utils.exceptions import SizeError

logger = logging.getLogger(__name__)


def _components(spec: KroneckerSumSpec, sizes: Optional[Tuple[int, int]]):
    spec_a, spec_b = spec.spec_a, spec.spec_b
    if sizes is not None:
        spec_a, spec_b = spec_a.with_size(int(sizes[0])), spec_b.with_size(int(sizes[1]))
    return build_sparse_jacobi(spec_a), build_sparse_jacobi(spec_b)


def kronecker_spectrum(
    spec: KroneckerSumSpec,
    sizes: Optional[Tuple[int, int]] = None,
    vector_a=0,
    vector_b=0,
) -> SpectralMeasureApprox:
    """
    Спектральная мера вектора Φ = φ_a ⊗ φ_b для J_θ, собранная из данных
    компонент без построения матрицы произведения.

    Args:
        spec: Параметры модели
        sizes: Усечения (n_a, n_b) вместо n_max компонент
        vector_a, vector_b: Узел (δ-вектор) или вектор для каждой компоненты
    """
    op_a, op_b = _components(spec, sizes)
    if op_a.dimension * op_b.dimension > Config.KRONECKER_MAX_DIMENSION:
        raise SizeError(
            f"Размерность произведения {op_a.dimension}×{op_b.dimension} превышает "
            f"{Config.KRONECKER_MAX_DIMENSION}",
            details={"dim_a": op_a.dimension, "dim_b": op_b.dimension},
        )
    mu = from_eigensystem(*op_a.eigensystem, vector_a)
    nu = from_eigensystem(*op_b.eigensystem, vector_b)
    measure = product_measure(mu, nu, spec.theta)
    logger.info(
        f"Мера суммы Кронекера: θ={spec.theta}, {op_a.dimension}×{op_b.dimension}, "
        f"{measure.n_atoms} атомов"
    )
    return measure


def kronecker_operator(
    spec: KroneckerSumSpec, sizes: Optional[Tuple[int, int]] = None
) -> OperatorMatrix:
    """Явная разреженная матрица J_θ (для малых усечений и проверок)"""
    op_a, op_b = _components(spec, sizes)
    dimension = op_a.dimension * op_b.dimension
    if dimension > Config.KRONECKER_MAX_DIMENSION:
        raise SizeError(
            f"Размерность произведения {dimension} превышает {Config.KRONECKER_MAX_DIMENSION}",
            details={"dimension": dimension},
        )
    matrix = sparse.kron(op_a.matrix, sparse.identity(op_b.dimension)) + spec.theta * sparse.kron(
        sparse.identity(op_a.dimension), op_b.matrix
    )
    grid_a, grid_b = np.meshgrid(op_a.coordinates[:, 0], op_b.coordinates[:, 0], indexing="ij")
    coordinates = np.stack([grid_a.ravel(), grid_b.ravel()], axis=1)
    return OperatorMatrix(
        matrix=matrix.tocsr(),
        coordinates=coordinates,
        kind="kronecker_sum",
        metadata={"theta": spec.theta},
    )
