"""
Модуль валидации числовых параметров
Проверяет области определения до начала вычислений
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Optional, Type

from src.utils.exceptions import DomainError, LabException

logger = logging.getLogger(__name__)


@dataclass
class ValidationResult:
    """Результат валидации"""

    is_valid: bool
    cleaned_value: Any
    error_message: Optional[str] = None


class ParameterValidator:
    """Валидатор параметров моделей"""

    def validate_finite(self, name: str, value: float) -> ValidationResult:
        """Значение должно быть конечным вещественным числом"""
        try:
            number = float(value)
        except (TypeError, ValueError):
            return ValidationResult(False, value, f"{name} должен быть числом, получено {value!r}")
        if not math.isfinite(number):
            return ValidationResult(False, number, f"{name} должен быть конечным")
        return ValidationResult(True, number)

    def validate_positive(self, name: str, value: float, strict: bool = True) -> ValidationResult:
        """
        Проверка положительности

        Args:
            name: Имя параметра для сообщения
            value: Значение
            strict: Требовать строгую положительность
        """
        result = self.validate_finite(name, value)
        if not result.is_valid:
            return result
        number = result.cleaned_value
        if (strict and number <= 0) or (not strict and number < 0):
            bound = "> 0" if strict else ">= 0"
            return ValidationResult(False, number, f"{name} должен быть {bound}, получено {number}")
        return ValidationResult(True, number)

    def validate_range(
        self,
        name: str,
        value: float,
        low: float,
        high: float,
        closed: bool = True,
    ) -> ValidationResult:
        """Проверка принадлежности отрезку [low, high] или интервалу (low, high)"""
        result = self.validate_finite(name, value)
        if not result.is_valid:
            return result
        number = result.cleaned_value
        inside = low <= number <= high if closed else low < number < high
        if not inside:
            brackets = ("[", "]") if closed else ("(", ")")
            return ValidationResult(
                False,
                number,
                f"{name} должен лежать в {brackets[0]}{low}, {high}{brackets[1]}, получено {number}",
            )
        return ValidationResult(True, number)

    def validate_integer_at_least(self, name: str, value: int, minimum: int) -> ValidationResult:
        """Целое число не меньше minimum"""
        if isinstance(value, bool) or int(value) != value:
            return ValidationResult(False, value, f"{name} должен быть целым, получено {value!r}")
        number = int(value)
        if number < minimum:
            return ValidationResult(False, number, f"{name} должен быть >= {minimum}, получено {number}")
        return ValidationResult(True, number)


def require(result: ValidationResult, error_cls: Type[LabException] = DomainError) -> Any:
    """Возвращает очищенное значение или поднимает исключение"""
    if not result.is_valid:
        logger.debug(f"Валидация не пройдена: {result.error_message}")
        raise error_cls(result.error_message, details={"value": repr(result.cleaned_value)})
    return result.cleaned_value


# Глобальный экземпляр валидатора
validator = ParameterValidator()
