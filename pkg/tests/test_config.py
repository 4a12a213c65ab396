"""
Тесты для config
Тестирование конфигурации и переменных окружения
"""

import importlib
import os
from unittest.mock import patch

import pytest

from config import Config


@pytest.fixture
def reload_config():
    """Перезагрузка config с текущим окружением; после теста исходные значения"""
    import config

    yield lambda: importlib.reload(config)
    importlib.reload(config)


class TestConfig:
    """Тесты для класса Config"""

    def test_config_required_fields(self) -> None:
        """Тест наличия обязательных полей конфигурации"""
        required_fields = [
            "DEBUG",
            "LOG_LEVEL",
            "DEFAULT_WORKERS",
            "DEFAULT_MASTER_SEED",
            "OUTPUT_DIR",
            "SCHEMA_VERSION",
            "BETHE_POOL_SIZE",
            "BETHE_BURN_IN",
            "BETHE_READOUT",
            "BETHE_MAX_GENERATIONS",
            "CANTOR_DEPTH",
            "KRONECKER_MAX_DIMENSION",
            "ENUMERATION_SITE_CAP",
            "DENSE_DIMENSION_CAP",
        ]

        for field in required_fields:
            assert hasattr(Config, field), f"Отсутствует обязательное поле: {field}"

    def test_defaults_are_sane(self) -> None:
        assert Config.DEFAULT_WORKERS >= 1
        assert Config.BETHE_POOL_SIZE >= 1000
        assert Config.BETHE_BURN_IN + Config.BETHE_READOUT <= Config.BETHE_MAX_GENERATIONS
        assert Config.SCHEMA_VERSION == "1.0"

    @patch.dict(
        os.environ,
        {
            "DISORDER_LAB_WORKERS": "8",
            "DEFAULT_MASTER_SEED": "42",
            "OUTPUT_DIR": "/tmp/lab",
            "DEBUG": "yes",
            "LOG_LEVEL": "warning",
        },
    )
    def test_config_loads_from_env(self, reload_config) -> None:
        """Тест загрузки конфигурации из переменных окружения"""
        config = reload_config()

        assert config.Config.DEFAULT_WORKERS == 8
        assert config.Config.DEFAULT_MASTER_SEED == 42
        assert config.Config.OUTPUT_DIR == "/tmp/lab"
        assert config.Config.DEBUG is True
        assert config.Config.LOG_LEVEL == "WARNING"

    @patch.dict(os.environ, {"DEBUG": "False"})
    def test_config_boolean_parsing(self, reload_config) -> None:
        config = reload_config()
        assert config.Config.DEBUG is False

    @patch.dict(os.environ, {"DISORDER_LAB_WORKERS": "3"})
    def test_backward_compatibility_exports(self, reload_config) -> None:
        """Тест экспорта переменных модуля"""
        config = reload_config()
        assert config.DEFAULT_WORKERS == 3
        assert config.OUTPUT_DIR == config.Config.OUTPUT_DIR
