"""Общие сервисы командной строки: ошибки, сообщения, форматирование, модели."""

from .errors import CalculusError, InputError, VerificationError

__all__ = [
    # Errors
    "CalculusError",
    "InputError",
    "VerificationError",
]
