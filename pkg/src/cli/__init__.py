"""
Запуск экспериментов из командной строки
"""

from src.cli.artifacts import ArtifactWriter, ExperimentResult, build_report
from src.cli.catalog import EXPERIMENTS, Experiment, get_experiment, list_experiments
from src.cli.runner import build_parser, main, resolve_config, run
from src.cli.schemas import ExperimentConfig, ExperimentParams, build_config, validate_params

__all__ = [
    "EXPERIMENTS",
    "ArtifactWriter",
    "Experiment",
    "ExperimentConfig",
    "ExperimentParams",
    "ExperimentResult",
    "build_config",
    "build_parser",
    "build_report",
    "get_experiment",
    "list_experiments",
    "main",
    "resolve_config",
    "run",
    "validate_params",
]
