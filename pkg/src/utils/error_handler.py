"""
Система обработки ошибок для запуска экспериментов
"""

import json
import logging
import traceback
from datetime import datetime
from functools import wraps
from typing import Any, Callable, Dict, Optional

from src.utils.exceptions import (
    ConfigurationError,
    ConvergenceError,
    LabException,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIGURATION = 2
EXIT_CONVERGENCE = 3


class ErrorHandler:
    """Обработчик ошибок лаборатории"""

    def __init__(self, error_log_file: str = "error_log.json") -> None:
        self.error_stats: Dict[str, int] = {}
        self.error_log_file = error_log_file

    def log_error(self, error: Exception, context: Optional[Dict[str, Any]] = None) -> None:
        """
        Логирование ошибки

        Args:
            error: Исключение
            context: Контекст ошибки (эксперимент, параметры)
        """
        error_data = {
            "timestamp": datetime.now().isoformat(),
            "error_type": type(error).__name__,
            "message": str(error),
            "details": error.details if isinstance(error, LabException) else {},
            "traceback": traceback.format_exc(),
            "context": context or {},
        }

        # Логируем в файл
        try:
            with open(self.error_log_file, "a", encoding="utf-8") as f:
                f.write(json.dumps(error_data, ensure_ascii=False, default=str) + "\n")
        except Exception as e:
            logger.error(f"Не удалось записать в лог ошибок: {e}")

        logger.error(f"Error: {error_data['error_type']}: {error_data['message']}")

        error_type = type(error).__name__
        if error_type not in self.error_stats:
            self.error_stats[error_type] = 0
        self.error_stats[error_type] += 1

    @staticmethod
    def exit_code_for(error: Exception) -> int:
        """Код завершения процесса для исключения"""
        if isinstance(error, ConfigurationError):
            return EXIT_CONFIGURATION
        if isinstance(error, ConvergenceError):
            return EXIT_CONVERGENCE
        return EXIT_FAILURE

    def handle_error(self, error: Exception, context: Optional[Dict[str, Any]] = None) -> int:
        """Логирует ошибку и возвращает код завершения"""
        self.log_error(error, context)
        code = self.exit_code_for(error)
        if code == EXIT_CONFIGURATION:
            logger.critical(f"❌ Ошибка конфигурации: {error}")
        elif code == EXIT_CONVERGENCE:
            logger.critical(f"⏳ Нет сходимости: {error}")
        else:
            logger.critical(f"💥 Критическая ошибка: {error}")
        return code

    def get_error_stats(self) -> Dict[str, int]:
        """Получить статистику ошибок"""
        return self.error_stats.copy()

    def clear_error_stats(self) -> None:
        """Очистить статистику ошибок"""
        self.error_stats.clear()


# Глобальный обработчик ошибок
error_handler = ErrorHandler()


def handle_exceptions(func: Callable[..., int]) -> Callable[..., int]:
    """
    Декоратор для команд CLI: исключение превращается в код завершения
    """

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> int:
        try:
            return func(*args, **kwargs)
        except LabException as e:
            context = {"function": func.__name__}
            if e.experiment:
                context["experiment"] = e.experiment
            return error_handler.handle_error(e, context)
        except Exception as e:
            return error_handler.handle_error(e, {"function": func.__name__})

    return wrapper


def safe_execute(func: Callable, *args: Any, default_return: Any = None, **kwargs: Any) -> Any:
    """
    Безопасное выполнение функции с обработкой ошибок

    Args:
        func: Функция для выполнения
        default_return: Значение по умолчанию при ошибке
    """
    try:
        return func(*args, **kwargs)
    except Exception as e:
        error_handler.log_error(e, {"function": func.__name__})
        return default_return
