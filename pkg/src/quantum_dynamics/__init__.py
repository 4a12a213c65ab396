"""
Квантовая динамика на конечных усечениях
"""

from src.quantum_dynamics.evolution import (
    cesaro_running_average,
    diffusion_constants,
    diffusion_exponents,
    distances,
    evolve,
    moments,
    probability_profile,
    sojourn_time,
)
from src.quantum_dynamics.models import (
    ExponentReport,
    ResolventTransport,
    SojournResult,
    StateVector,
    TransportProfile,
    TransportSeries,
)
from src.quantum_dynamics.transport import resolvent_transport, transport_profile

__all__ = [
    "ExponentReport",
    "ResolventTransport",
    "SojournResult",
    "StateVector",
    "TransportProfile",
    "TransportSeries",
    "cesaro_running_average",
    "diffusion_constants",
    "diffusion_exponents",
    "distances",
    "evolve",
    "moments",
    "probability_profile",
    "resolvent_transport",
    "sojourn_time",
    "transport_profile",
]
