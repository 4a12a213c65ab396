"""
Модель Эдвардса-Андерсона: кластерные нижние границы, фрустрация,
калибровка и свободная энергия
"""

from src.ea_glass.clusters import (
    ClusterEnergyEstimator,
    average_cluster_energy,
    classical_energies,
    cluster_gauge_transform,
    cluster_ground_state,
    frustration_indicator,
    gauge_orbits,
    gauge_rotation_operator,
    ideal_energy_per_site,
    lower_bound_e,
    misfit,
    quantum_cluster_hamiltonian,
    quantum_ground_energy,
)
from src.ea_glass.lattice import (
    ChainFreeEnergy,
    LatticeEnergyEstimator,
    chain_free_energy,
    cluster_decomposition_bound,
    finite_lattice_ground_state,
    free_energy_per_site,
    gauge_transform,
    lattice_energy_average,
    random_lattice,
    self_averaging_variance,
    stability_constant,
)
from src.ea_glass.models import (
    BoundReport,
    ClusterAverage,
    ClusterGeometry,
    ClusterGroundState,
    ClusterInstance,
    LatticeGroundState,
    LatticeInstance,
    SelfAveragingReport,
    SpinConfiguration,
)

__all__ = [
    "BoundReport",
    "ChainFreeEnergy",
    "ClusterAverage",
    "ClusterEnergyEstimator",
    "ClusterGeometry",
    "ClusterGroundState",
    "ClusterInstance",
    "LatticeEnergyEstimator",
    "LatticeGroundState",
    "LatticeInstance",
    "SelfAveragingReport",
    "SpinConfiguration",
    "average_cluster_energy",
    "chain_free_energy",
    "classical_energies",
    "cluster_decomposition_bound",
    "cluster_gauge_transform",
    "cluster_ground_state",
    "finite_lattice_ground_state",
    "free_energy_per_site",
    "frustration_indicator",
    "gauge_orbits",
    "gauge_rotation_operator",
    "gauge_transform",
    "ideal_energy_per_site",
    "lattice_energy_average",
    "lower_bound_e",
    "misfit",
    "quantum_cluster_hamiltonian",
    "quantum_ground_energy",
    "random_lattice",
    "self_averaging_variance",
    "stability_constant",
]
