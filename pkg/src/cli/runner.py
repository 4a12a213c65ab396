"""
Командная строка лаборатории: разбор конфигурации и запуск экспериментов
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from dotenv import dotenv_values

from config import Config
from src.cli.artifacts import ArtifactWriter
from src.cli.catalog import get_experiment, list_experiments
from src.cli.schemas import ExperimentConfig, build_config, validate_params
from src.disorder import RealizationSeed
from src.utils.error_handler import EXIT_OK, handle_exceptions
from src.utils.exceptions import ConfigurationError, LabException

logger = logging.getLogger(__name__)

# Ключи запуска, которые не относятся к блоку параметров эксперимента
RUN_KEYS = ("master_seed", "n_workers", "output")


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """Файл key = value (формат .env); пустые значения пропускаются"""
    if path is None:
        return {}
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigurationError(f"Файл конфигурации не найден: {config_path}")
    values = dotenv_values(config_path)
    logger.debug(f"Прочитано {len(values)} ключей из {config_path}")
    return {key.strip(): value for key, value in values.items() if value not in (None, "")}


def parse_overrides(pairs: Optional[Sequence[str]]) -> Dict[str, str]:
    """--set key=value; поздние значения перекрывают ранние"""
    overrides: Dict[str, str] = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(
                f"Ожидалось key=value, получено {pair!r}", details={"override": pair}
            )
        overrides[key.strip()] = value.strip()
    return overrides


def resolve_config(
    experiment: str,
    config_file: Optional[str] = None,
    overrides: Optional[Sequence[str]] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    output: Optional[str] = None,
) -> ExperimentConfig:
    """
    Конфигурация запуска: файл, затем --set, затем явные флаги.
    Параметры проверяются схемой эксперимента до создания артефактов.
    """
    entry = get_experiment(experiment)
    raw = {**load_config_file(config_file), **parse_overrides(overrides)}
    raw.pop("experiment", None)
    run_options = {key: raw.pop(key) for key in RUN_KEYS if key in raw}
    if seed is not None:
        run_options["master_seed"] = seed
    if workers is not None:
        run_options["n_workers"] = workers
    if output is not None:
        run_options["output"] = output
    params = validate_params(experiment, entry.schema, raw)
    return build_config(experiment, params, **run_options)


def run(config: ExperimentConfig) -> List[Path]:
    """
    Выполнение эксперимента и запись артефактов.
    Результат зависит только от (config, master_seed), не от n_workers.
    """
    entry = get_experiment(config.experiment)
    seed = RealizationSeed(config.master_seed, 0)
    with ArtifactWriter(config) as writer:
        try:
            result = entry.handler(config.params, seed, config.n_workers)
        except LabException as e:
            e.experiment = e.experiment or config.experiment
            raise
        return writer.write(result)


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Файл key = value с параметрами")
    parser.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="Переопределение параметра (можно повторять)",
    )
    parser.add_argument("--seed", type=int, help="Главное зерно")
    parser.add_argument(
        "--workers", type=int, help=f"Число процессов (по умолчанию {Config.DEFAULT_WORKERS})"
    )
    parser.add_argument("--output", help=f"Каталог результатов (по умолчанию {Config.OUTPUT_DIR})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disorder-lab", description="Численная лаборатория случайных операторов"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("list", help="Каталог экспериментов")

    run_parser = commands.add_parser("run", help="Запуск эксперимента по имени")
    run_parser.add_argument("experiment")
    _add_run_options(run_parser)

    for name, description, _ in list_experiments():
        direct = commands.add_parser(name, help=description)
        direct.set_defaults(experiment=name)
        _add_run_options(direct)
    return parser


def print_catalog() -> None:
    for name, description, topic in list_experiments():
        print(f"{name:<18} {description} [{topic}]")


@handle_exceptions
def main(argv: Optional[Sequence[str]] = None) -> int:
    """Точка входа; возвращает код завершения"""
    args = build_parser().parse_args(argv)
    if args.command == "list":
        print_catalog()
        return EXIT_OK
    config = resolve_config(
        args.experiment, args.config, args.overrides, args.seed, args.workers, args.output
    )
    written = run(config)
    for path in written:
        print(path)
    return EXIT_OK
