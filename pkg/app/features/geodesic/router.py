"""Интегрирование геодезических связности τ."""

import argparse
import logging

from app.shared.calculus.connection import levi_civita_symbols
from app.shared.calculus.geodesics import initial_state, integrate, speed_along
from app.shared.decorators import catch_errors
from app.shared.errors import InputError
from app.shared.formatters import CommandOutput
from app.shared.helpers import emit, model_from_args, parse_start
from app.shared.messages import CommandsData, MessagesData

logger = logging.getLogger(__name__)


def setup_parser(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(CommandsData.GEODESIC, parents=[common], help=MessagesData.HELP_GEODESIC)
    parser.add_argument("--model", required=True, help="файл модели или builtin:<имя>")
    parser.add_argument("--start", required=True, help="начальное состояние 'x1,..,xn;v1,..,vn'")
    parser.add_argument("--steps", type=int, default=1000, help="число шагов RK4")
    parser.add_argument("--t-end", dest="t_end", type=float, required=True, help="конечное значение параметра")
    parser.set_defaults(handler=handle_geodesic)


@catch_errors()
def handle_geodesic(args: argparse.Namespace) -> int:
    model = model_from_args(args)
    if model.is_super:
        raise InputError("Геодезические для суперметрик не вычисляются")
    if args.steps < 1:
        raise InputError("--steps должно быть положительным")
    field_ = model.tensor_field()
    position, velocity = parse_start(args.start, field_.dimension)
    connection = levi_civita_symbols(field_)
    logger.info(f"geodesic: {model.name}, {args.steps} шагов до t={args.t_end}")

    trajectory = integrate(connection, initial_state(position, velocity), args.t_end, args.steps)
    speeds = speed_along(connection, field_.g, trajectory)
    drift = max(abs(s - speeds[0]) for s in speeds)
    report = {
        "steps": args.steps,
        "t_end": args.t_end,
        "speed_initial": speeds[0],
        "speed_drift": drift,
        "final": trajectory[-1].as_record(),
    }
    output = CommandOutput(CommandsData.GEODESIC, model.name, [s.as_record() for s in trajectory], report)
    emit(output, args.format, model.chart)
    return 0
