"""
Транспорт на корневом дереве: P̂_{δ_0,η}(x) = (η/π)∫|G(0,x;E+iη)|² dE
по сферам |x| = r
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy import special

from src.bethe.models import BetheModelSpec, TreeTransport
from src.bethe.population import default_seed, path_green, run_population
from src.core.validation import require, validator
from src.disorder import RealizationSeed
from src.utils.exceptions import SizeError

logger = logging.getLogger(__name__)

MIN_TREE_DEPTH = 12
# Радиус по умолчанию 20/η: масса за пределами мала при любом E
RADIUS_FACTOR = 20.0


def _sphere_profile(spec: BetheModelSpec, logs: np.ndarray) -> np.ndarray:
    """K^r·Av|G(0,r)|² для r = 0..depth"""
    radii = np.arange(logs.shape[1])
    log_mean = special.logsumexp(2.0 * logs, axis=0) - math.log(logs.shape[0])
    return np.exp(log_mean + radii * math.log(spec.K))


def tree_transport(
    spec: BetheModelSpec,
    eta: float,
    radius_cap: Optional[int] = None,
    energy: float = 0.0,
    b_values: Optional[Sequence[float]] = None,
    n_energies: int = 128,
    pool_size: Optional[int] = None,
    n_paths: int = 1000,
    generations: Optional[int] = None,
    seed: Optional[RealizationSeed] = None,
) -> TreeTransport:
    """
    Масса P̂ по сферам, масса внутри |x| < b/η и профиль K^{|x|}·Av|G|²

    Интеграл по энергии берется квадратурой Гаусса-Лежандра на оси
    E = c·tan θ, c = край спектра; сумма по сферам сверяется с
    тождеством Уорда Σ_x P̂(x) = 1.
    """
    eta = require(validator.validate_positive("eta", eta))
    depth = int(radius_cap) if radius_cap is not None else max(
        MIN_TREE_DEPTH, int(math.ceil(RADIUS_FACTOR / eta))
    )
    if depth < MIN_TREE_DEPTH or depth < 1.0 / eta:
        raise SizeError(
            f"Глубина дерева {depth} мала для η={eta}: нужно >= max({MIN_TREE_DEPTH}, 1/η)",
            details={"depth": depth, "eta": eta},
        )
    require(validator.validate_integer_at_least("n_energies", n_energies, 8))
    seed = default_seed(seed)
    b_values = np.linspace(0.1, 2.0, 20) if b_values is None else np.asarray(b_values, float)

    scale = spec.spectral_edge
    theta, weights = np.polynomial.legendre.leggauss(n_energies)
    theta = theta * math.pi / 2
    energies = scale * np.tan(theta)
    jacobian = weights * (math.pi / 2) * scale / np.cos(theta) ** 2

    zetas = np.append(energies, energy) + 1j * eta
    pools, _, _ = run_population(spec, zetas, pool_size, generations, seed=seed)
    rng = seed.generator(depth, n_paths)

    sphere_mass = np.zeros(depth + 1)
    for index in range(n_energies):
        logs = path_green(spec, zetas[index], pools[index], depth, n_paths, rng)
        sphere_mass += jacobian[index] * (eta / math.pi) * _sphere_profile(spec, logs)
    logs = path_green(spec, zetas[-1], pools[-1], depth, n_paths, rng)
    normalized = _sphere_profile(spec, logs)

    radii = np.arange(depth + 1)
    cumulative = np.cumsum(sphere_mass)
    # Число сфер с r < b/η, не больше depth + 1
    counts = np.minimum(np.ceil(b_values / eta).astype(int), depth + 1)
    inner = np.where(counts > 0, cumulative[np.maximum(counts - 1, 0)], 0.0)
    total = float(cumulative[-1])

    if abs(total - 1.0) > 1e-2:
        logger.warning(f"Правило сумм Уорда нарушено: Σ P̂ = {total:.4f} при η={eta}")
    result = TreeTransport(
        eta=eta,
        energy=float(energy),
        radii=radii,
        sphere_mass=sphere_mass,
        normalized_profile=normalized,
        b_values=b_values,
        inner_mass=inner,
        total_mass=total,
        slope_bound=float(np.max(inner / b_values)),
    )
    logger.info(
        f"Транспорт на дереве K={spec.K}, λ={spec.lam}, η={eta}: Σ P̂ = {total:.5f}, "
        f"max масса/b = {result.slope_bound:.4f}"
    )
    return result
