"""
Возврат к равновесию в модели Эмха-Радина со случайными связями
"""

from src.emch_radin.decay import (
    DecayProductEstimator,
    curves_agree,
    decay_curve,
    decay_envelope_classify,
    delta_coefficient,
    exact_decay,
    halving_oracle,
    mc_decay,
    nonrandom_profile_decay,
    reference_forms,
    upper_envelope,
)
from src.emch_radin.finite_volume import (
    bond_coupling,
    finite_volume_magnetization,
    neighborhood_contained,
)
from src.emch_radin.models import (
    DecayCurve,
    DecayKind,
    EmchRadinSpec,
    EnvelopeVerdict,
    unit_offsets,
)

__all__ = [
    "DecayCurve",
    "DecayKind",
    "DecayProductEstimator",
    "EmchRadinSpec",
    "EnvelopeVerdict",
    "bond_coupling",
    "curves_agree",
    "decay_curve",
    "decay_envelope_classify",
    "delta_coefficient",
    "exact_decay",
    "finite_volume_magnetization",
    "halving_oracle",
    "mc_decay",
    "neighborhood_contained",
    "nonrandom_profile_decay",
    "reference_forms",
    "unit_offsets",
    "upper_envelope",
]
