import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

if __package__ in (None, ""):
    sys.path.append(str(Path(__file__).resolve().parent.parent))

from app.features import setup_routers
from app.settings import config
from app.shared.helpers import common_options
from app.shared.messages import MessagesData

logger = logging.getLogger(__name__)


def setup_logging() -> None:
    """
    Логи пишутся в stderr (и в LOG_FILE, если задан), stdout остаётся под результаты
    """
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.LOG_FILE:
        handlers.append(logging.FileHandler(config.LOG_FILE, encoding="utf-8"))
    logging.basicConfig(
        level=config.LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iterforms", description=MessagesData.HELP_MAIN)
    subparsers = parser.add_subparsers(dest="command", required=True)
    setup_routers(subparsers, common_options())
    return parser


def run_command(argv: Optional[List[str]] = None) -> int:
    """
    Разбирает аргументы и запускает обработчик команды. Возвращает код завершения
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        # argparse завершает работу с кодом 2 при ошибке разбора и 0 при --help
        return int(exit_.code or 0)
    logger.debug(f"Команда: {args.command}")
    return args.handler(args)


def main():
    """
    Главная функция
    """
    setup_logging()
    sys.exit(run_command())


if __name__ == "__main__":
    main()
