"""Проверки естественных уравнений Ric(τ) = 0, их расщепления и разложения."""

import argparse
import logging

from app.shared.calculus.conventions_data import convention_ledger
from app.shared.calculus.relativity import decomposition_check, einstein_split_residual, natural_residual
from app.shared.decorators import catch_errors
from app.shared.errors import InputError
from app.shared.formatters import CommandOutput
from app.shared.helpers import emit, model_from_args, sample_count
from app.shared.messages import CommandsData, MessagesData

logger = logging.getLogger(__name__)

CHECKS = {
    "natural": natural_residual,
    "einstein-split": einstein_split_residual,
    "decomposition": decomposition_check,
}


def setup_parser(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(CommandsData.CHECK, parents=[common], help=MessagesData.HELP_CHECK)
    parser.add_argument("kind", choices=CommandsData.CHECK_KINDS)
    parser.add_argument("--model", required=True, help="файл модели или builtin:<имя>")
    parser.add_argument("--tolerance", type=float, default=None, help="порог невязки")
    parser.add_argument("--points", type=int, default=None, help="число точек выборки")
    parser.set_defaults(handler=handle_check)


def _decomposition_notes(report) -> list:
    notes = []
    for fit in (report.antisymmetric, report.symmetric):
        if not fit.determined:
            notes.append(MessagesData.CHECK_UNDETERMINED.format(name=fit.name))
        elif fit.deviates:
            notes.append(MessagesData.CHECK_DEVIATION.format(name=fit.name, value=fit.constant))
    return notes


@catch_errors()
def handle_check(args: argparse.Namespace) -> int:
    model = model_from_args(args)
    if model.is_super:
        raise InputError("Проверки уравнений для суперметрик не определены")
    field_ = model.tensor_field()
    count = sample_count(args, default=None)
    logger.info(f"check {args.kind}: {model.name}")

    report = CHECKS[args.kind](field_, tolerance=args.tolerance, count=count)
    details = report.as_dict()
    if args.kind == "decomposition":
        details["notes"] = _decomposition_notes(report)
        details["conventions"] = convention_ledger(
            {
                "antisymmetric_constant": report.antisymmetric.constant,
                "symmetric_constant": report.symmetric.constant,
            }
        )
    name = f"{args.kind} ({model.name})"
    verdict = MessagesData.CHECK_PASSED if report.passed else MessagesData.CHECK_FAILED
    output = CommandOutput(f"{CommandsData.CHECK} {args.kind}", model.name, verdict.format(name=name), details)
    emit(output, args.format, model.chart)
    return 0 if report.passed else 1
