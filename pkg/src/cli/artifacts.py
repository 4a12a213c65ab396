"""
Артефакты запуска: data.csv, report.json и текстовый run.log
"""

import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

from config import Config
from src.cli.schemas import ExperimentConfig
from src.core.serialization import write_csv, write_json

logger = logging.getLogger(__name__)

DATA_FILE = "data.csv"
REPORT_FILE = "report.json"
LOG_FILE = "run.log"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class ExperimentResult:
    """Результат эксперимента: таблица (может отсутствовать) и отчет"""

    report: Dict[str, Any]
    columns: Optional[Mapping[str, Sequence[Any]]] = None
    summary: str = ""


@dataclass
class ArtifactWriter:
    """
    Контекст запуска: создает каталог <output>/<experiment>, на время
    запуска подключает файловый лог к корневому логгеру.
    """

    config: ExperimentConfig
    written: List[Path] = field(default_factory=list)
    _handler: Optional[logging.Handler] = field(default=None, repr=False)

    @property
    def directory(self) -> Path:
        return Path(self.config.output) / self.config.experiment

    def __enter__(self) -> "ArtifactWriter":
        self.directory.mkdir(parents=True, exist_ok=True)
        self._handler = logging.FileHandler(self.directory / LOG_FILE, mode="w", encoding="utf-8")
        self._handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logging.getLogger().addHandler(self._handler)
        logger.info(f"▶️ Эксперимент {self.config.experiment}, зерно {self.config.master_seed}")
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc is not None:
            logger.error(f"❌ Эксперимент {self.config.experiment} прерван: {exc}")
        if self._handler is not None:
            logging.getLogger().removeHandler(self._handler)
            self._handler.close()
            self._handler = None

    def write(self, result: ExperimentResult) -> List[Path]:
        """CSV (если есть таблица) и JSON-отчет с полной конфигурацией"""
        if result.columns:
            self.written.append(write_csv(self.directory / DATA_FILE, result.columns))
        report = build_report(self.config, result, [path.name for path in self.written])
        self.written.append(write_json(self.directory / REPORT_FILE, report))
        logger.info(f"✅ Эксперимент {self.config.experiment} завершен: {result.summary}")
        return self.written


def build_report(
    config: ExperimentConfig, result: ExperimentResult, artifacts: Sequence[str] = ()
) -> Dict[str, Any]:
    """Отчет: версия схемы, конфигурация и результаты; время только в metadata"""
    return {
        "schema_version": Config.SCHEMA_VERSION,
        "experiment": config.experiment,
        "config": config.resolved(),
        "results": result.report,
        "metadata": {
            "finished_at": datetime.now().isoformat(timespec="seconds"),
            "artifacts": list(artifacts) + [REPORT_FILE],
        },
    }
