"""Общие хелперы для команд: общие флаги, загрузка модели, вывод результата."""

from __future__ import annotations

import argparse
import logging
from typing import List, Tuple

from app.shared.calculus.charts import Chart
from app.shared.errors import InputError
from app.shared.formatters import CommandOutput, render
from app.shared.messages import CommandsData, MessagesData
from app.shared.model_storage import ModelFile, load_model

logger = logging.getLogger(__name__)


def common_options() -> argparse.ArgumentParser:
    """Флаги, общие для всех команд: --format и --seed."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--format", choices=CommandsData.FORMATS, default="table", help="формат вывода")
    parser.add_argument("--seed", type=int, default=None, help="зерно случайной выборки")
    return parser


def model_from_args(args: argparse.Namespace) -> ModelFile:
    """Загружает модель и применяет --seed."""
    model = load_model(args.model)
    return model.with_overrides(seed=args.seed)


def sample_count(args: argparse.Namespace, default: int | None) -> int | None:
    if args.points is None:
        return default
    if args.points < 1:
        raise InputError("--points должно быть положительным")
    return args.points


def emit(output: CommandOutput, fmt: str, chart: Chart | None = None, kind: str | None = None) -> None:
    print(render(output, fmt, chart, kind))


def parse_vector(text: str, size: int) -> List[float]:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError as error:
        raise InputError(MessagesData.ERROR_START_FORMAT) from error
    if len(values) != size:
        raise InputError(f"Ожидается {size} чисел, получено {len(values)}")
    return values


def parse_start(text: str, size: int) -> Tuple[List[float], List[float]]:
    """Разбирает '--start x1,..,xn;v1,..,vn'."""
    parts = text.split(";")
    if len(parts) != 2:
        raise InputError(MessagesData.ERROR_START_FORMAT)
    return parse_vector(parts[0], size), parse_vector(parts[1], size)
