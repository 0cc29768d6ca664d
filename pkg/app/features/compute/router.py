"""Таблицы компонент: символы Кристоффеля, кручение, тензоры Римана и Риччи, обратная метрика."""

import argparse
import logging

from app.shared.calculus.conventions_data import INDEX_LAYOUTS
from app.shared.calculus.connection import levi_civita_symbols, riemann, torsion
from app.shared.calculus.supergeometry import super_christoffel, super_riemann
from app.shared.decorators import catch_errors
from app.shared.errors import InputError
from app.shared.formatters import CommandOutput, component_table
from app.shared.helpers import emit, model_from_args
from app.shared.messages import CommandsData, MessagesData

logger = logging.getLogger(__name__)


def setup_parser(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(CommandsData.COMPUTE, parents=[common], help=MessagesData.HELP_COMPUTE)
    parser.add_argument("table", choices=CommandsData.COMPUTE_TABLES)
    parser.add_argument("--model", required=True, help="файл модели или builtin:<имя>")
    parser.add_argument("--simplify", action="store_true", help="упрощать компоненты перед выводом")
    parser.set_defaults(handler=handle_compute)


def _super_tables(model, table: str) -> dict:
    metric = model.super_metric()
    chart = model.chart
    if table == "inverse":
        entries = {
            (i, j): metric.g_inv[i][j] for i in range(chart.dimension) for j in range(chart.dimension)
        }
    elif table == "christoffel":
        entries = super_christoffel(metric)
    elif table == "riemann":
        entries = super_riemann(metric)
    else:
        raise InputError(f"Таблица {table} не определена для суперметрик")
    return {
        ",".join(chart.names[i] for i in index): value.to_text(chart)
        for index, value in entries.items()
        if not value.is_zero()
    }


@catch_errors()
def handle_compute(args: argparse.Namespace) -> int:
    model = model_from_args(args)
    logger.info(f"compute {args.table}: {model.name}")
    report = {"dimension": model.chart.dimension, "layout": INDEX_LAYOUTS.get(args.table)}

    if model.is_super:
        report["layout"] = INDEX_LAYOUTS.get(f"super_{args.table}", report["layout"])
        results = _super_tables(model, args.table)
        kind = None
    else:
        field_ = model.tensor_field()
        if args.table == "inverse":
            table = field_.g_inv
        else:
            connection = levi_civita_symbols(field_)
            report["provenance"] = connection.provenance
            if args.table == "christoffel":
                table = connection.gamma
            elif args.table == "torsion":
                table = torsion(connection, field_)
            else:
                curvature = riemann(connection)
                table = curvature.riemann if args.table == "riemann" else curvature.ricci
        results = component_table(table, model.chart, simplify=args.simplify)
        kind = args.table

    report["nonzero"] = len(results)
    output = CommandOutput(f"{CommandsData.COMPUTE} {args.table}", model.name, results, report)
    emit(output, args.format, model.chart, kind)
    return 0
