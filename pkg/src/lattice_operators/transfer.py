"""
Матрицы переноса, критерий краев подвижности и конечнообъемный классификатор
"""

import logging
import math
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from src.core.validation import require, validator
from src.lattice_operators.builders import (
    barrier_positions,
    build_almost_mathieu,
    sparse_potential,
)
from src.lattice_operators.models import (
    AlmostMathieuSpec,
    EnergyZone,
    MobilityEdges,
    OperatorMatrix,
    SparseJacobiSpec,
    TransferProduct,
    ZoneClassification,
)
from src.utils.exceptions import DomainError

logger = logging.getLogger(__name__)

# Перенормировка произведений, чтобы избежать переполнения
RENORMALIZE_ABOVE = 1e100
EDGE_TOLERANCE = 1e-9


def mobility_edges(beta: int, v: float) -> MobilityEdges:
    """λ± из (β−1)(4−λ²) = v²"""
    require(validator.validate_integer_at_least("beta", beta, 2))
    require(validator.validate_positive("v", v, strict=True))
    critical_v = 2 * math.sqrt(beta - 1)
    if v >= critical_v:
        return MobilityEdges(beta, v, critical_v, None, None)
    edge = math.sqrt(4 - v * v / (beta - 1))
    return MobilityEdges(beta, v, critical_v, -edge, edge)


def zone_criterion(beta: int, v: float, lam: float) -> float:
    """(β−1)(4−λ²) − v²: положительно в сингулярно-непрерывной зоне"""
    return (beta - 1) * (4 - lam * lam) - v * v


def classify_energy(spec: SparseJacobiSpec, lam: float) -> EnergyZone:
    if not math.isfinite(lam) or abs(lam) >= 2:
        raise DomainError(
            f"Энергия λ={lam} вне существенного спектра [−2, 2]", details={"lambda": lam}
        )
    criterion = zone_criterion(spec.beta, spec.v, lam)
    scale = max(1.0, (spec.beta - 1) * 4, spec.v * spec.v)
    if abs(criterion) <= EDGE_TOLERANCE * scale:
        return EnergyZone.EDGE
    return EnergyZone.SC_ZONE if criterion > 0 else EnergyZone.PP_ZONE


def site_matrix(lam: float, potential: float) -> np.ndarray:
    return np.array([[lam - potential, -1.0], [1.0, 0.0]])


def transfer_product(
    spec: SparseJacobiSpec,
    lam: float,
    site_range: Optional[Tuple[int, int]] = None,
) -> TransferProduct:
    """
    Произведение M_{stop−1}···M_start одноузельных матриц [[λ−v_n, −1],[1,0]]

    Матрица хранится перенормированной: полное произведение равно
    matrix·exp(log_scale). На каждом барьере фиксируется log‖P‖.
    """
    start, stop = site_range if site_range is not None else (0, spec.n_max)
    if not 0 <= start <= stop <= spec.n_max:
        raise DomainError(
            f"Окно [{start}, {stop}) вне усечения [0, {spec.n_max})",
            details={"start": start, "stop": stop, "n_max": spec.n_max},
        )
    potential = sparse_potential(spec)
    barriers = set(np.flatnonzero(potential).tolist())

    product = np.eye(2)
    log_scale = 0.0
    barrier_sites, barrier_log_norms = [], []
    for n in range(start, stop):
        product = site_matrix(lam, potential[n]) @ product
        peak = np.max(np.abs(product))
        if peak > RENORMALIZE_ABOVE:
            product = product / peak
            log_scale += math.log(peak)
        if n in barriers:
            barrier_sites.append(n)
            barrier_log_norms.append(float(np.log(np.linalg.norm(product, 2)) + log_scale))

    return TransferProduct(
        matrix=product,
        log_scale=log_scale,
        start=start,
        stop=stop,
        barrier_sites=tuple(barrier_sites),
        barrier_log_norms=tuple(barrier_log_norms),
    )


def lyapunov_1d(
    diagonal: Sequence[float], energies: Iterable[float]
) -> np.ndarray:
    """
    Показатель Ляпунова (1/n)·log‖T_n(E)‖ трехдиагонального оператора
    с единичной внедиагональю; векторизовано по энергиям.
    """
    potential = np.asarray(diagonal, dtype=float)
    energies = np.atleast_1d(np.asarray(list(energies), dtype=float))
    u = np.ones_like(energies)
    u_prev = np.zeros_like(energies)
    log_growth = np.zeros_like(energies)
    for value in potential:
        u, u_prev = (energies - value) * u - u_prev, u
        norm = np.hypot(u, u_prev)
        log_growth += np.log(norm)
        u, u_prev = u / norm, u_prev / norm
    return log_growth / potential.size


def inverse_participation_ratio(vectors: np.ndarray) -> np.ndarray:
    """IPR = Σ|ψ|⁴ / (Σ|ψ|²)² по столбцам"""
    weights = np.abs(np.asarray(vectors)) ** 2
    if weights.ndim == 1:
        weights = weights[:, None]
    return np.sum(weights**2, axis=0) / np.sum(weights, axis=0) ** 2


def eigenvector_decay_contrast(
    op: OperatorMatrix, spec: SparseJacobiSpec, lam: float, window: float = 0.02
) -> dict:
    """
    Собственный вектор, ближайший к λ: IPR и наклон log-массы по сегментам
    между соседними барьерами.
    """
    if not op.is_tridiagonal:
        raise DomainError("Контраст затухания определен для трехдиагональных операторов")
    values, vectors = scipy.linalg.eigh_tridiagonal(
        op.diagonal, op.off_diagonal, select="v", select_range=(lam - window, lam + window)
    )
    if values.size == 0:
        return {"lambda": lam, "eigenvalue": None, "ipr": None, "tail_slope": None}
    k = int(np.argmin(np.abs(values - lam)))
    psi = vectors[:, k]

    sites = op.coordinates[:, 0]
    barriers = barrier_positions(spec.beta, spec.n_max, spec.seed)
    edges = np.concatenate(([sites[0]], barriers, [sites[-1] + 1]))
    segment = np.searchsorted(edges, sites, side="right") - 1
    masses = np.bincount(segment, weights=np.abs(psi) ** 2, minlength=edges.size - 1)
    lengths = np.maximum(np.diff(edges), 1)
    density = masses / lengths
    usable = density > 0
    if np.count_nonzero(usable) >= 2:
        slope = float(np.polyfit(np.flatnonzero(usable), np.log(density[usable]), 1)[0])
    else:
        slope = None
    return {
        "lambda": lam,
        "eigenvalue": float(values[k]),
        "ipr": float(inverse_participation_ratio(psi)[0]),
        "tail_slope": slope,
    }


def _prufer_growth(
    spec: SparseJacobiSpec, energies: np.ndarray, n_realizations: int
) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Средний прирост log(Q_j/Q_{j−1}) на барьер для каждой энергии.

    Q = u_{n+1}² + u_n² − λ·u_{n+1}·u_n сохраняется на свободных участках
    при |λ| < 2, поэтому меняется только на барьерах. После каждого
    барьера пара (u_{n+1}, u_n) нормируется на Q = 1.
    """
    lam = energies[:, None]
    masks = np.zeros((n_realizations, spec.n_max), dtype=bool)
    for r in range(n_realizations):
        positions = barrier_positions(spec.beta, spec.n_max, spec.seed.child(r))
        masks[r, positions] = True

    shape = (energies.size, n_realizations)
    u = np.full(shape, math.cos(spec.phi))
    u_prev = np.full(shape, math.sin(spec.phi))
    q = u * u + u_prev * u_prev - lam * u * u_prev
    u, u_prev = u / np.sqrt(q), u_prev / np.sqrt(q)

    total = np.zeros(shape)
    total_sq = np.zeros(shape)
    count = np.zeros(n_realizations)
    for n in range(spec.n_max):
        at_barrier = masks[:, n]
        potential = np.where(at_barrier, spec.v, 0.0)[None, :]
        u, u_prev = (lam - potential) * u - u_prev, u
        if not at_barrier.any():
            continue
        q = u * u + u_prev * u_prev - lam * u * u_prev
        increment = np.where(at_barrier[None, :], np.log(q), 0.0)
        total += increment
        total_sq += increment**2
        scale = np.where(at_barrier[None, :], np.sqrt(q), 1.0)
        u, u_prev = u / scale, u_prev / scale
        count += at_barrier

    n_increments = count.sum()
    mean = total.sum(axis=1) / n_increments
    variance = total_sq.sum(axis=1) / n_increments - mean**2
    std_error = np.sqrt(np.maximum(variance, 0.0) / n_increments)
    return mean, std_error, float(count.mean())


def finite_volume_classify(
    spec: SparseJacobiSpec,
    energies: Optional[Sequence[float]] = None,
    n_realizations: int = 256,
) -> ZoneClassification:
    """
    Конечнообъемный классификатор зон.

    Решение, растущее на барьере в среднем быстрее чем в β раз по Q,
    квадратично суммируемо на фоне промежутков β^j: энергия относится
    к точечной зоне, иначе к сингулярно-непрерывной.

    Args:
        spec: Модель (используется зерно spec.seed, реализации через child)
        energies: Сетка энергий; по умолчанию 41 точка внутри (−2, 2)
        n_realizations: Число реализаций ω
    """
    if energies is None:
        energies = np.linspace(-2.0, 2.0, 43)[1:-1]
    energies = np.asarray(energies, dtype=float)
    if np.any(np.abs(energies) >= 2):
        raise DomainError("Классификатор определен только внутри (−2, 2)")
    require(validator.validate_integer_at_least("n_realizations", n_realizations, 1))

    mean, std_error, barriers = _prufer_growth(spec, energies, n_realizations)
    threshold = math.log(spec.beta)
    measured = tuple(EnergyZone.PP_ZONE if m > threshold else EnergyZone.SC_ZONE for m in mean)
    predicted = tuple(classify_energy(spec, float(lam)) for lam in energies)
    result = ZoneClassification(
        energies=energies,
        mean_log_growth=mean,
        std_error=std_error,
        threshold=threshold,
        measured=measured,
        predicted=predicted,
        n_realizations=n_realizations,
        barriers_per_realization=barriers,
    )
    logger.info(
        f"Классификатор зон: {energies.size} энергий, согласие "
        f"{result.agreement_fraction:.1%} с критерием"
    )
    return result


def almost_mathieu_scan(
    lambdas: Iterable[float],
    n_max: int = 2000,
    omega: float = (math.sqrt(5) - 1) / 2,
    theta: float = 0.0,
    n_energies: int = 20,
) -> list:
    """
    Переход металл-изолятор почти-Матье: средний IPR собственных векторов
    и медианный показатель Ляпунова на собственных значениях. На спектре
    L = max(0, log(λ/2)).
    """
    rows = []
    for lam in lambdas:
        op = build_almost_mathieu(AlmostMathieuSpec(float(lam), omega, theta, n_max))
        values, vectors = op.eigensystem
        picks = values[np.linspace(0, values.size - 1, n_energies).astype(int)]
        lyapunov = lyapunov_1d(op.diagonal, picks)
        rows.append(
            {
                "lambda": float(lam),
                "mean_ipr": float(np.mean(inverse_participation_ratio(vectors))),
                "median_lyapunov": float(np.median(lyapunov)),
                "predicted_lyapunov": max(0.0, math.log(lam / 2)) if lam > 0 else 0.0,
            }
        )
        logger.debug(f"Почти-Матье λ={lam}: IPR={rows[-1]['mean_ipr']:.4g}")
    return rows
