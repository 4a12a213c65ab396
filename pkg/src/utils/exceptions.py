"""
Кастомные исключения лаборатории
"""

from datetime import datetime
from typing import Any, Dict, Optional


class LabException(Exception):
    """Базовое исключение для всех ошибок лаборатории"""

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        experiment: Optional[str] = None,
    ) -> None:
        super().__init__(message)
        self.details = details or {}
        self.experiment = experiment
        self.timestamp = datetime.now()

    def __reduce__(self):
        # Исключения пересекают границу процессов в пуле воркеров
        return (self.__class__, (str(self), self.details, self.experiment))

    def to_dict(self) -> Dict[str, Any]:
        """Конвертация в словарь для логирования"""
        return {
            "exception_type": self.__class__.__name__,
            "message": str(self),
            "details": self.details,
            "experiment": self.experiment,
            "timestamp": self.timestamp.isoformat(),
        }


class ConfigurationError(LabException):
    """Ошибки конфигурации: неизвестный тип распределения, нарушение схемы"""

    pass


class DomainError(LabException):
    """Параметр вне математической области определения"""

    pass


class SizeError(LabException):
    """Слишком малое усечение или превышен лимит размерности"""

    pass


class UnsupportedOperationError(LabException):
    """Операция не поддерживается для данного закона или режима"""

    pass


class EstimatorError(LabException):
    """Ошибка оценщика на конкретной реализации"""

    def __init__(
        self,
        message: str,
        realization_index: int,
        details: Optional[Dict[str, Any]] = None,
        experiment: Optional[str] = None,
    ) -> None:
        details = dict(details or {})
        details["realization_index"] = realization_index
        super().__init__(message, details=details, experiment=experiment)
        self.realization_index = realization_index

    def __reduce__(self):
        return (
            self.__class__,
            (str(self), self.realization_index, self.details, self.experiment),
        )


class ConvergenceError(LabException):
    """Итерационная процедура не сошлась"""

    pass


class FitError(LabException):
    """Вырожденная сетка или слишком короткий ряд для подгонки"""

    pass
