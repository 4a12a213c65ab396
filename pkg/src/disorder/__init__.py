"""
Случайные законы связей/потенциала и усреднение по беспорядку
"""

from src.disorder.averaging import average, evaluate_realizations, pairwise_sum, summarize
from src.disorder.models import (
    DistributionKind,
    DistributionSpec,
    MomentBoundReport,
    MonteCarloEstimate,
    RealizationSeed,
)
from src.disorder.sampling import (
    analytic_mean,
    analytic_moment,
    check_moment_bounds,
    cosine_moment,
    draw,
    sample_couplings,
)

__all__ = [
    "DistributionKind",
    "DistributionSpec",
    "MomentBoundReport",
    "MonteCarloEstimate",
    "RealizationSeed",
    "analytic_mean",
    "analytic_moment",
    "average",
    "check_moment_bounds",
    "cosine_moment",
    "draw",
    "evaluate_realizations",
    "pairwise_sum",
    "sample_couplings",
    "summarize",
]
