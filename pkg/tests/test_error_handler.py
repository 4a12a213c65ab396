"""
Тесты для error_handler
Коды завершения, журнал ошибок и сериализация исключений
"""

import json
import pickle

import pytest

from src.utils.error_handler import (
    EXIT_CONFIGURATION,
    EXIT_CONVERGENCE,
    EXIT_FAILURE,
    EXIT_OK,
    ErrorHandler,
    handle_exceptions,
    safe_execute,
)
from src.utils.exceptions import (
    ConfigurationError,
    ConvergenceError,
    DomainError,
    EstimatorError,
)


@pytest.fixture
def handler(tmp_path):
    return ErrorHandler(str(tmp_path / "error_log.json"))


class TestErrorHandler:
    """Тесты для ErrorHandler"""

    def test_exit_codes(self) -> None:
        assert ErrorHandler.exit_code_for(ConfigurationError("x")) == EXIT_CONFIGURATION
        assert ErrorHandler.exit_code_for(ConvergenceError("x")) == EXIT_CONVERGENCE
        assert ErrorHandler.exit_code_for(DomainError("x")) == EXIT_FAILURE
        assert ErrorHandler.exit_code_for(ValueError("x")) == EXIT_FAILURE

    def test_log_error_writes_json_line(self, handler) -> None:
        handler.log_error(DomainError("λ вне спектра", details={"lambda": 3.0}), {"experiment": "x"})
        line = open(handler.error_log_file, encoding="utf-8").read().strip()
        record = json.loads(line)
        assert record["error_type"] == "DomainError"
        assert record["details"] == {"lambda": 3.0}
        assert record["context"] == {"experiment": "x"}

    def test_error_stats(self, handler) -> None:
        handler.handle_error(DomainError("a"))
        handler.handle_error(DomainError("b"))
        handler.handle_error(ConvergenceError("c"))
        assert handler.get_error_stats() == {"DomainError": 2, "ConvergenceError": 1}
        handler.clear_error_stats()
        assert handler.get_error_stats() == {}


class TestDecorators:
    """Тесты для handle_exceptions и safe_execute"""

    def test_handle_exceptions_returns_code(self, mocker) -> None:
        handle = mocker.patch("src.utils.error_handler.error_handler.handle_error", return_value=3)

        @handle_exceptions
        def failing() -> int:
            raise ConvergenceError("не сошлось", experiment="bethe-green")

        assert failing() == 3
        context = handle.call_args.args[1]
        assert context == {"function": "failing", "experiment": "bethe-green"}

    def test_handle_exceptions_passes_result(self) -> None:
        @handle_exceptions
        def ok() -> int:
            return EXIT_OK

        assert ok() == EXIT_OK

    def test_safe_execute_default(self, mocker) -> None:
        mocker.patch("src.utils.error_handler.error_handler.log_error")
        assert safe_execute(lambda: 1 / 0, default_return=-1) == -1
        assert safe_execute(lambda x: x + 1, 1) == 2


class TestExceptions:
    """Исключения должны пересекать границу процессов"""

    def test_pickle_round_trip(self) -> None:
        error = pickle.loads(pickle.dumps(DomainError("x", {"a": 1}, "emch-decay")))
        assert (str(error), error.details, error.experiment) == ("x", {"a": 1}, "emch-decay")

    def test_estimator_error_keeps_index(self) -> None:
        error = pickle.loads(pickle.dumps(EstimatorError("сбой", 17)))
        assert error.realization_index == 17
        assert error.details["realization_index"] == 17

    def test_to_dict(self) -> None:
        record = ConfigurationError("плохо", experiment="ea-bound").to_dict()
        assert record["exception_type"] == "ConfigurationError"
        assert record["experiment"] == "ea-bound"
