"""Самопроверка: прогон батареи встроенных проверок."""

import argparse
import logging

from app.shared.decorators import catch_errors
from app.shared.errors import InputError
from app.shared.formatters import CommandOutput
from app.shared.helpers import emit
from app.shared.messages import CommandsData, MessagesData
from app.shared.selftest import run_selftest, selftest_service

logger = logging.getLogger(__name__)


def setup_parser(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(CommandsData.SELFTEST, parents=[common], help=MessagesData.HELP_SELFTEST)
    parser.add_argument("--filter", dest="name_filter", default=None, help="подстрока имени проверки")
    parser.add_argument("--list", dest="list_only", action="store_true", help="только перечислить проверки")
    parser.set_defaults(handler=handle_selftest)


@catch_errors()
def handle_selftest(args: argparse.Namespace) -> int:
    names = selftest_service.list_checks()
    if args.list_only:
        emit(CommandOutput(CommandsData.SELFTEST, "builtin", names), args.format)
        return 0
    if args.name_filter and not any(args.name_filter in name for name in names):
        raise InputError(MessagesData.SELFTEST_UNKNOWN.format(filter=args.name_filter))

    results, conventions = run_selftest(args.name_filter)
    passed = sum(1 for result in results if result.passed)
    report = {
        "summary": MessagesData.SELFTEST_SUMMARY.format(passed=passed, total=len(results)),
        "passed": passed == len(results),
        "conventions": conventions,
    }
    if args.format == "json":
        rows = [result.as_dict() for result in results]
    else:
        rows = [MessagesData.SELFTEST_HEADER.format(count=len(results))]
        for result in results:
            template = MessagesData.CHECK_PASSED if result.passed else MessagesData.CHECK_FAILED
            rows.append(f"{template.format(name=result.name)} ({result.seconds:.2f} с)")
    emit(CommandOutput(CommandsData.SELFTEST, "builtin", rows, report), args.format)
    return 0 if report["passed"] else 1
