import logging
import os

from dotenv import load_dotenv

# Загружаем переменные окружения
load_dotenv()

# Настройка логирования
logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[
        logging.FileHandler(os.getenv("LOG_FILE", "disorder_lab.log"), encoding="utf-8"),
        logging.StreamHandler(),
    ],
)
logger = logging.getLogger(__name__)


class Config:
    """Класс конфигурации лаборатории"""

    # Разработка
    DEBUG = os.getenv("DEBUG", "False").lower() in ("true", "1", "yes")
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
    LOG_FILE = os.getenv("LOG_FILE", "disorder_lab.log")

    # Запуск экспериментов
    DEFAULT_WORKERS = int(os.getenv("DISORDER_LAB_WORKERS", "1"))
    DEFAULT_MASTER_SEED = int(os.getenv("DEFAULT_MASTER_SEED", "20240601"))
    OUTPUT_DIR = os.getenv("OUTPUT_DIR", "./results")
    SCHEMA_VERSION = os.getenv("SCHEMA_VERSION", "1.0")

    # Популяционная динамика на дереве Бете
    BETHE_POOL_SIZE = int(os.getenv("BETHE_POOL_SIZE", "10000"))
    BETHE_BURN_IN = int(os.getenv("BETHE_BURN_IN", "200"))
    BETHE_READOUT = int(os.getenv("BETHE_READOUT", "100"))
    BETHE_MAX_GENERATIONS = int(os.getenv("BETHE_MAX_GENERATIONS", "50000"))

    # Спектральные меры
    CANTOR_DEPTH = int(os.getenv("CANTOR_DEPTH", "14"))

    # Ограничения размерности
    KRONECKER_MAX_DIMENSION = int(os.getenv("KRONECKER_MAX_DIMENSION", "1000000"))
    ENUMERATION_SITE_CAP = int(os.getenv("ENUMERATION_SITE_CAP", "24"))
    DENSE_DIMENSION_CAP = int(os.getenv("DENSE_DIMENSION_CAP", "4096"))


# Backward compatibility - экспортируем переменные как раньше
DEFAULT_WORKERS = Config.DEFAULT_WORKERS
OUTPUT_DIR = Config.OUTPUT_DIR
