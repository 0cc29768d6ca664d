"""Исключения вычислителя и их коды завершения."""

from __future__ import annotations

from typing import Any, Sequence


class CalculusError(Exception):
    """Базовая ошибка вычислителя."""

    exit_code: int = 2


class InputError(CalculusError):
    """Некорректные входные данные (код 2)."""


class VerificationError(CalculusError):
    """Нарушено проверяемое тождество (код 1)."""

    exit_code = 1


class ExpressionSyntaxError(InputError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} (позиция {position})")
        self.position = position
        self.text = text


class UnknownIdentifierError(InputError):
    def __init__(self, name: str, position: int):
        super().__init__(f"Неизвестный идентификатор '{name}' (позиция {position})")
        self.name = name
        self.position = position


class ModelSchemaError(InputError):
    """Нарушение схемы файла модели, с путём до поля."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class DimensionError(InputError):
    pass


class DepthOverflowError(InputError):
    def __init__(self, slot: int, depth: int):
        super().__init__(f"Слот d{slot} превышает глубину итерации {depth}")
        self.slot = slot
        self.depth = depth


class DegenerateMetricError(InputError):
    def __init__(self, point: Sequence[float], determinant: float):
        coords = ", ".join(f"{value:.6g}" for value in point)
        super().__init__(f"Вырожденная метрика: det = {determinant:.3e} в точке ({coords})")
        self.point = tuple(point)
        self.determinant = determinant


class EvaluationDomainError(CalculusError):
    """Выражение не определено в точке (log, sqrt, деление на ноль)."""

    def __init__(self, node: str, point: Sequence[float] | None = None):
        where = ""
        if point is not None:
            where = " в точке (" + ", ".join(f"{value:.6g}" for value in point) + ")"
        super().__init__(f"Выражение не определено: {node}{where}")
        self.node = node
        self.point = None if point is None else tuple(point)


class SamplingExhaustedError(CalculusError):
    def __init__(self, retries: int, last_error: EvaluationDomainError | None = None):
        message = f"Не удалось найти допустимую точку за {retries} попыток"
        if last_error is not None:
            message += f": {last_error}"
        super().__init__(message)
        self.retries = retries


class DomainExitError(CalculusError):
    """Траектория покинула область карты."""

    def __init__(self, last_state: Any, step: int):
        super().__init__(f"Траектория покинула область карты на шаге {step}")
        self.last_state = last_state
        self.step = step


class InconsistencyError(VerificationError):
    pass


class TorsionMismatchError(VerificationError):
    pass


class TowerMismatchError(VerificationError):
    pass
