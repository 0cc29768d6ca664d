import logging
import sys
from functools import wraps

from .errors import CalculusError, InputError, VerificationError
from .messages import MessagesData

logger = logging.getLogger(__name__)


def catch_errors(default_message: str = MessagesData.ERROR_DEFAULT):
    """
    Декоратор для обработки ошибок в обработчиках команд.
    Переводит исключения в код завершения и сообщение в stderr.
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except VerificationError as e:
                logger.error(f"Тождество не выполнено в {func.__name__}: {e}", exc_info=True)
                print(MessagesData.ERROR_VERIFICATION.format(error=e), file=sys.stderr)
                return e.exit_code
            except InputError as e:
                logger.error(f"Ошибка входных данных в {func.__name__}: {e}", exc_info=True)
                print(MessagesData.ERROR_INPUT.format(error=e), file=sys.stderr)
                return e.exit_code
            except CalculusError as e:
                logger.error(f"Ошибка вычисления в {func.__name__}: {e}", exc_info=True)
                print(MessagesData.ERROR_RUNTIME.format(error=e), file=sys.stderr)
                return e.exit_code
            except Exception as e:
                logger.error(f"Ошибка в {func.__name__}: {e}", exc_info=True)
                print(default_message.format(error=e), file=sys.stderr)
                return 2

        return wrapper

    return decorator
