"""
Модель Андерсона на дереве Бете: популяционная динамика функций Грина,
показатель Ляпунова, свободная энергия, критерии и транспорт
"""

from src.bethe.estimators import (
    extended_states_criteria,
    free_energy_fn,
    inequality_suite,
    lyapunov_exponent,
)
from src.bethe.models import (
    BetheModelSpec,
    CriteriaReport,
    FreeEnergyEstimate,
    InequalityCheck,
    LyapunovEstimate,
    NegativeMomentProbe,
    RootGreenStats,
    TreeGreenEnsemble,
    TreeTransport,
)
from src.bethe.population import (
    free_cavity_green,
    free_root_green,
    green_recursion_step,
    negative_moment_probe,
    path_green,
    root_green,
    run_population,
)
from src.bethe.transport import tree_transport

__all__ = [
    "BetheModelSpec",
    "CriteriaReport",
    "FreeEnergyEstimate",
    "InequalityCheck",
    "LyapunovEstimate",
    "NegativeMomentProbe",
    "RootGreenStats",
    "TreeGreenEnsemble",
    "TreeTransport",
    "extended_states_criteria",
    "free_cavity_green",
    "free_energy_fn",
    "free_root_green",
    "green_recursion_step",
    "inequality_suite",
    "lyapunov_exponent",
    "negative_moment_probe",
    "path_green",
    "root_green",
    "run_population",
    "tree_transport",
]
