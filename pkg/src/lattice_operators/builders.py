"""
Построение конечных усечений операторов
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy import sparse

from src.disorder import RealizationSeed, sample_couplings
from src.lattice_operators.models import (
    AlmostMathieuSpec,
    AndersonSpec,
    OperatorMatrix,
    SparseJacobiSpec,
)
from src.utils.exceptions import SizeError

logger = logging.getLogger(__name__)

# Предел числа узлов ящика Андерсона (L^d)
MAX_ANDERSON_SITES = 10**7


def deterministic_barriers(beta: int, n_max: int) -> np.ndarray:
    """Положения a_j < n_max: a_1 = β − 1, a_j = a_{j−1} + β^j"""
    positions = []
    position, j = beta - 1, 1
    while position < n_max:
        positions.append(position)
        j += 1
        position += beta**j
    return np.array(positions, dtype=np.int64)


def barrier_count(beta: int, radius: int) -> int:
    """#{j : a_j ≤ R}"""
    return int(deterministic_barriers(beta, radius + 1).size)


def barrier_positions(
    beta: int, n_max: int, seed: Optional[RealizationSeed] = None
) -> np.ndarray:
    """
    Положения барьеров внутри [0, n_max)

    Без зерна возвращает детерминированные a_j, с зерном сдвигает каждое
    a_j на ω_j, равномерное на {−j, …, j}.
    """
    if n_max <= beta - 1:
        raise SizeError(
            f"n_max={n_max} не содержит первый барьер a_1={beta - 1}",
            details={"beta": beta, "n_max": n_max},
        )
    # Берем с запасом: сдвиг ω_j может вернуть барьер за n_max обратно внутрь
    base = deterministic_barriers(beta, n_max + int(math.log(n_max + 2, beta)) + 2)
    if seed is None:
        positions = base
    else:
        rng = seed.generator()
        j = np.arange(1, base.size + 1)
        positions = base + rng.integers(-j, j + 1)
    return positions[(positions >= 0) & (positions < n_max)]


def _tridiagonal(diagonal: np.ndarray, off_diagonal: np.ndarray) -> sparse.csr_matrix:
    return sparse.diags(
        [off_diagonal, diagonal, off_diagonal], offsets=[-1, 0, 1], format="csr"
    )


def _chain_operator(
    diagonal: np.ndarray, kind: str, coordinates: np.ndarray, metadata: dict
) -> OperatorMatrix:
    off_diagonal = np.ones(diagonal.size - 1)
    return OperatorMatrix(
        matrix=_tridiagonal(diagonal, off_diagonal),
        coordinates=coordinates.reshape(-1, 1),
        kind=kind,
        diagonal=diagonal,
        off_diagonal=off_diagonal,
        metadata=metadata,
    )


def sparse_potential(spec: SparseJacobiSpec) -> np.ndarray:
    """Потенциал v·Σ_j δ(n − a_j^ω) на узлах 0..n_max−1"""
    potential = np.zeros(spec.n_max)
    if spec.v > 0:
        potential[barrier_positions(spec.beta, spec.n_max, spec.seed)] = spec.v
    return potential


def build_sparse_jacobi(spec: SparseJacobiSpec) -> OperatorMatrix:
    """
    Трехдиагональная матрица разреженной модели Якоби.

    Граничное условие u_{−1}·cos φ − u_0·sin φ = 0 дает u_{−1} = u_0·tan φ,
    поэтому первая диагональная позиция получает добавку tan φ. При φ = π/2
    условие превращается в u_0 = 0, и узел 0 исключается из матрицы.
    """
    if spec.n_max <= spec.beta - 1:
        raise SizeError(
            f"n_max={spec.n_max} не содержит первый барьер a_1={spec.beta - 1}",
            details={"beta": spec.beta, "n_max": spec.n_max},
        )
    diagonal = sparse_potential(spec)
    coordinates = np.arange(spec.n_max)
    cos_phi = math.cos(spec.phi)
    if abs(cos_phi) < 1e-12:
        diagonal, coordinates = diagonal[1:], coordinates[1:]
    else:
        diagonal[0] += math.tan(spec.phi)

    metadata = {
        "beta": spec.beta,
        "v": spec.v,
        "phi": spec.phi,
        "master_seed": spec.seed.master_seed,
        "realization_index": spec.seed.realization_index,
    }
    logger.debug(f"Построена разреженная модель Якоби: n_max={spec.n_max}, β={spec.beta}")
    return _chain_operator(diagonal, "sparse_jacobi", coordinates, metadata)


def build_almost_mathieu(spec: AlmostMathieuSpec) -> OperatorMatrix:
    sites = np.arange(spec.n_max)
    diagonal = spec.lam * np.cos(2 * np.pi * (spec.omega * sites + spec.theta))
    metadata = {"lambda": spec.lam, "omega": spec.omega, "theta": spec.theta}
    return _chain_operator(diagonal, "almost_mathieu", sites, metadata)


def _axis_adjacency(side: int, periodic: bool) -> sparse.csr_matrix:
    """Смежность цепочки; при L = 2 и периодичности ребро удваивается"""
    adjacency = sparse.diags(
        [np.ones(side - 1), np.ones(side - 1)], offsets=[-1, 1], format="lil"
    )
    if periodic:
        adjacency[0, side - 1] += 1
        adjacency[side - 1, 0] += 1
    return adjacency.tocsr()


def laplacian(dim: int, side: int, periodic: bool = False) -> sparse.csr_matrix:
    """Центрированный дискретный лапласиан (Δu)(n) = Σ_{|m−n|=1} u(m)"""
    axis = _axis_adjacency(side, periodic)
    identity = sparse.identity(side, format="csr")
    total = None
    for a in range(dim):
        factors = [axis if b == a else identity for b in range(dim)]
        term = factors[0]
        for factor in factors[1:]:
            term = sparse.kron(term, factor, format="csr")
        total = term if total is None else total + term
    return total.tocsr()


def build_anderson(spec: AndersonSpec) -> OperatorMatrix:
    if spec.dim * math.log(spec.box_side) > math.log(MAX_ANDERSON_SITES):
        raise SizeError(
            f"Ящик {spec.box_side}^{spec.dim} превышает лимит {MAX_ANDERSON_SITES} узлов",
            details={"dim": spec.dim, "box_side": spec.box_side},
        )
    n_sites = spec.box_side**spec.dim
    if spec.v > 0:
        potential = spec.v * sample_couplings(spec.disorder, n_sites, spec.seed)
    else:
        potential = np.zeros(n_sites)

    coordinates = np.indices((spec.box_side,) * spec.dim).reshape(spec.dim, -1).T
    metadata = {
        "dim": spec.dim,
        "box_side": spec.box_side,
        "v": spec.v,
        "periodic": spec.periodic,
        "disorder": spec.disorder.kind.value,
        "master_seed": spec.seed.master_seed,
        "realization_index": spec.seed.realization_index,
    }

    if spec.dim == 1 and not spec.periodic:
        return _chain_operator(potential, "anderson", coordinates[:, 0], metadata)

    matrix = (laplacian(spec.dim, spec.box_side, spec.periodic) + sparse.diags(potential)).tocsr()
    logger.debug(f"Построена модель Андерсона {spec.box_side}^{spec.dim}, v={spec.v}")
    return OperatorMatrix(matrix=matrix, coordinates=coordinates, kind="anderson", metadata=metadata)
