"""
Конфигурация для pytest
Общие фикстуры и настройки для всех тестов
"""

import os
import shutil
import sys
import tempfile
from unittest.mock import Mock

import pytest

# Добавляем корневую директорию в путь
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import Config
from src.disorder import DistributionSpec, RealizationSeed
from src.lattice_operators import SparseJacobiSpec


@pytest.fixture
def mock_config():
    """Мок конфигурации для тестов"""
    config = Mock(spec=Config)
    config.DEFAULT_WORKERS = 1
    config.DEFAULT_MASTER_SEED = 12345
    config.OUTPUT_DIR = "./test_results"
    config.DEBUG = True
    return config


@pytest.fixture
def temp_output_dir():
    """Временная директория для артефактов"""
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    shutil.rmtree(temp_dir)


@pytest.fixture
def seed():
    """Базовое зерно реализаций"""
    return RealizationSeed(master_seed=20240601, realization_index=0)


@pytest.fixture
def bernoulli():
    return DistributionSpec.bernoulli(1.0)


@pytest.fixture
def uniform():
    return DistributionSpec.uniform(1.0)


@pytest.fixture
def gaussian():
    return DistributionSpec.gaussian(1.0)


@pytest.fixture
def sparse_spec(seed):
    """Разреженная модель Якоби β=2, v=1 на 10^4 узлах"""
    return SparseJacobiSpec(beta=2, v=1.0, n_max=10_000, phi=0.7, seed=seed)
