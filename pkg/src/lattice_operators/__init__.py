"""
Конечные усечения решеточных операторов и одномерный анализ матрицами переноса
"""

from src.lattice_operators.builders import (
    barrier_count,
    barrier_positions,
    build_almost_mathieu,
    build_anderson,
    build_sparse_jacobi,
    deterministic_barriers,
    laplacian,
    sparse_potential,
)
from src.lattice_operators.export import export_spectrum_csv, export_triplets, read_triplets
from src.lattice_operators.kronecker import kronecker_operator, kronecker_spectrum
from src.lattice_operators.models import (
    AlmostMathieuSpec,
    AndersonSpec,
    EnergyZone,
    KroneckerSumSpec,
    MobilityEdges,
    OperatorMatrix,
    SparseJacobiSpec,
    TransferProduct,
    ZoneClassification,
)
from src.lattice_operators.transfer import (
    almost_mathieu_scan,
    classify_energy,
    eigenvector_decay_contrast,
    finite_volume_classify,
    inverse_participation_ratio,
    lyapunov_1d,
    mobility_edges,
    transfer_product,
    zone_criterion,
)

__all__ = [
    "AlmostMathieuSpec",
    "AndersonSpec",
    "EnergyZone",
    "KroneckerSumSpec",
    "MobilityEdges",
    "OperatorMatrix",
    "SparseJacobiSpec",
    "TransferProduct",
    "ZoneClassification",
    "almost_mathieu_scan",
    "barrier_count",
    "barrier_positions",
    "build_almost_mathieu",
    "build_anderson",
    "build_sparse_jacobi",
    "classify_energy",
    "deterministic_barriers",
    "eigenvector_decay_contrast",
    "export_spectrum_csv",
    "export_triplets",
    "finite_volume_classify",
    "inverse_participation_ratio",
    "kronecker_operator",
    "kronecker_spectrum",
    "laplacian",
    "lyapunov_1d",
    "mobility_edges",
    "read_triplets",
    "sparse_potential",
    "transfer_product",
    "zone_criterion",
]
