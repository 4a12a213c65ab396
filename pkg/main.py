"""
Главный файл лаборатории - точка входа
"""

import sys

from config import logger
from src.cli import main


def run_cli() -> int:
    """Запуск командной строки"""
    try:
        logger.debug("🚀 Запуск disorder-lab")
        return main()
    except KeyboardInterrupt:
        logger.info("⏹️ Остановлено пользователем")
        return 130


if __name__ == "__main__":
    sys.exit(run_cli())
