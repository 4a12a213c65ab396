"""
⟨σ^x_{i0}⟩_V(t) в конечном объеме V = {0..n−1}^d
"""

import itertools
import logging
from functools import reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from src.disorder import RealizationSeed, draw
from src.emch_radin.decay import delta_coefficient
from src.emch_radin.models import EmchRadinSpec, Offset
from src.utils.exceptions import DomainError, SizeError

logger = logging.getLogger(__name__)

# плотная матрица плотности 2^10 × 2^10
MAX_DENSE_SITES = 10

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])


def _zigzag(k: int) -> int:
    return 2 * k if k >= 0 else -2 * k - 1


def _bond_key(a: Offset, b: Offset) -> Tuple[int, ...]:
    return tuple(_zigzag(k) for k in a) + tuple(_zigzag(k) for k in b)


def bond_coupling(spec: EmchRadinSpec, seed: RealizationSeed, a: Offset, b: Offset) -> float:
    """
    J связи (a, b) в координатах относительно i0

    Поток зависит только от пары узлов, поэтому вложенные объемы видят
    одинаковые связи.
    """
    if spec.disorder is None:
        return 1.0
    a, b = sorted((tuple(a), tuple(b)))
    return float(draw(spec.disorder, seed.generator(*_bond_key(a, b)), 1)[0])


def _bond_epsilon(spec: EmchRadinSpec, a: Offset, b: Offset) -> float:
    """ε(i − k) для i < k в лексикографическом порядке"""
    a, b = sorted((tuple(a), tuple(b)))
    return spec.profile.get(tuple(x - y for x, y in zip(a, b)), 0.0)


def _volume(spec: EmchRadinSpec, side: int, site: Optional[Sequence[int]]):
    if int(side) != side or side < 1:
        raise DomainError(f"Сторона объема должна быть целой >= 1, получено {side}")
    site = tuple(side // 2 for _ in range(spec.d)) if site is None else tuple(int(k) for k in site)
    if len(site) != spec.d or not all(0 <= k < side for k in site):
        raise DomainError(f"Узел {site} вне объема {side}^{spec.d}")
    relative: List[Offset] = [
        tuple(c - s for c, s in zip(coords, site))
        for coords in itertools.product(range(int(side)), repeat=spec.d)
    ]
    return site, relative


def _product_method(spec, seed, relative, times) -> np.ndarray:
    origin = tuple(0 for _ in range(spec.d))
    result = np.ones_like(times)
    for offset in relative:
        if offset == origin:
            continue
        epsilon = _bond_epsilon(spec, origin, offset)
        if epsilon > 0:
            coupling = bond_coupling(spec, seed, origin, offset)
            result = result * np.cos(2.0 * epsilon * coupling * times)
    return result


def _dense_method(spec, seed, relative, times) -> np.ndarray:
    """U(t)† σ^x_{i0} U(t) с диагональным H в z-базисе размерности 2^{|V|}"""
    n = len(relative)
    if n > MAX_DENSE_SITES:
        raise SizeError(
            f"Плотная эволюция для |V| = {n} превышает лимит {MAX_DENSE_SITES} узлов",
            details={"sites": n},
        )
    bits = (np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)) & 1
    spins = 1.0 - 2.0 * bits
    energies = np.zeros(2**n)
    for i, j in itertools.combinations(range(n), 2):
        epsilon = _bond_epsilon(spec, relative[i], relative[j])
        if epsilon > 0:
            coupling = bond_coupling(spec, seed, relative[i], relative[j])
            energies += epsilon * coupling * spins[:, i] * spins[:, j]

    local = scipy.linalg.expm(-spec.gamma * SIGMA_X)
    local /= np.trace(local)
    rho = reduce(np.kron, [local] * n)
    center = relative.index(tuple(0 for _ in range(spec.d)))
    sigma = reduce(np.kron, [SIGMA_X if k == center else np.eye(2) for k in range(n)])

    values = np.empty(times.size)
    for index, t in enumerate(times):
        phases = np.exp(-1j * energies * t)
        evolved = np.conj(phases)[:, None] * sigma * phases[None, :]
        values[index] = float(np.real(np.sum(rho * evolved.T)))
    return values


def finite_volume_magnetization(
    spec: EmchRadinSpec,
    side: int,
    t,
    seed: Optional[RealizationSeed] = None,
    site: Optional[Sequence[int]] = None,
    method: str = "product",
):
    """
    Точное ⟨σ^x_{i0}⟩_V(t) = δ·Π_{k∈V, k≠i0} cos(2ε(i0−k)J_{i0,k}t)

    Args:
        side: Сторона куба V = {0..side−1}^d
        site: i0 (по умолчанию центр V)
        method: product (разложение по связям i0) или dense (эволюция в 2^{|V|})
    """
    seed = seed if seed is not None else RealizationSeed(0)
    site, relative = _volume(spec, side, site)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if method == "product":
        values = delta_coefficient(spec.gamma) * _product_method(spec, seed, relative, times)
    elif method == "dense":
        values = _dense_method(spec, seed, relative, times)
    else:
        raise DomainError(f"Неизвестный метод: {method!r}")
    logger.debug(f"⟨σ^x⟩ в {side}^{spec.d} ({method}) для узла {site}")
    return float(values[0]) if np.ndim(t) == 0 else values


def neighborhood_contained(spec: EmchRadinSpec, side: int, site: Optional[Sequence[int]] = None) -> bool:
    """Все связи i0 с ε > 0 лежат внутри V"""
    site, relative = _volume(spec, side, site)
    inside = set(relative)
    return all(offset in inside for offset in spec.profile)

