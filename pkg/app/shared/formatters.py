"""Общие функции форматирования таблиц компонент и отчётов."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Sequence

import sympy as sp

from app.shared.calculus.charts import Chart
from app.shared.calculus.scalar_expr import to_text

# Шаблоны подписей компонент по виду таблицы
COMPONENT_LABELS = {
    "christoffel": lambda names, i: f"Γ^{names[i[0]]}_{{{names[i[1]]} {names[i[2]]}}}",
    "torsion": lambda names, i: f"T^{names[i[0]]}_{{{names[i[1]]} {names[i[2]]}}}",
    "riemann": lambda names, i: f"R_{{{names[i[0]]} {names[i[1]]}}}{{}}_{names[i[2]]}^{names[i[3]]}",
    "ricci": lambda names, i: f"Ric_{{{names[i[0]]} {names[i[1]]}}}",
    "inverse": lambda names, i: f"g^{{{names[i[0]]} {names[i[1]]}}}",
}


@dataclass
class CommandOutput:
    """Результат команды: {command, model, results, report}."""

    command: str
    model: str
    results: Any = None
    report: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"command": self.command, "model": self.model, "results": self.results, "report": self.report}


def _json_default(value: Any):
    if isinstance(value, sp.Basic):
        return to_text(value)
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"Не сериализуется: {type(value).__name__}")


def format_json(output: CommandOutput) -> str:
    return json.dumps(output.as_dict(), ensure_ascii=False, indent=2, default=_json_default)


def _indices(shape: Sequence[int]) -> Iterable[tuple[int, ...]]:
    return itertools.product(*(range(size) for size in shape))


def component_table(table, chart: Chart, simplify: bool = False) -> Dict[str, str]:
    """Ненулевые компоненты таблицы: подпись (имена через запятую) → выражение."""
    shape = table.shape
    result = {}
    for index in _indices(shape):
        value = table[index]
        if simplify:
            value = sp.simplify(value)
        if value == 0:
            continue
        key = ",".join(chart.names[i] for i in index)
        result[key] = to_text(value)
    return result


def format_component_lines(kind: str, components: Dict[str, str], chart: Chart) -> List[str]:
    """Строки вида 'Γ^theta_{phi phi} = -sin(theta) * cos(theta)'."""
    label = COMPONENT_LABELS[kind]
    lines = []
    for key, text in components.items():
        index = tuple(chart.index(name) for name in key.split(","))
        lines.append(f"{label(chart.names, index)} = {text}")
    return lines or ["(все компоненты равны нулю)"]


def format_report_lines(report: Dict[str, Any], indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(format_report_lines(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.extend(format_report_lines(item, indent + 1))
                lines.append("")
        elif isinstance(value, float):
            lines.append(f"{pad}{key}: {value:.6g}")
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines


def _flatten(values: Iterable[Any]) -> List[Any]:
    flat = []
    for value in values:
        if isinstance(value, (list, tuple)):
            flat.extend(value)
        else:
            flat.append(value)
    return flat


def format_table(output: CommandOutput, chart: Chart | None = None, kind: str | None = None) -> str:
    lines = [f"{output.command}: {output.model}"]
    if kind in COMPONENT_LABELS and isinstance(output.results, dict) and chart is not None:
        lines.extend(format_component_lines(kind, output.results, chart))
    elif isinstance(output.results, dict):
        lines.extend(f"{key} = {value}" for key, value in output.results.items())
    elif isinstance(output.results, list):
        for row in output.results:
            if isinstance(row, str):
                lines.append(row)
                continue
            values = _flatten(row.values()) if isinstance(row, dict) else _flatten(row)
            lines.append(" ".join(f"{v:.10g}" if isinstance(v, float) else str(v) for v in values))
    elif output.results is not None:
        lines.append(str(output.results))
    if output.report:
        lines.append("")
        lines.extend(format_report_lines(output.report))
    return "\n".join(lines)


def render(output: CommandOutput, fmt: str, chart: Chart | None = None, kind: str | None = None) -> str:
    if fmt == "json":
        return format_json(output)
    return format_table(output, chart, kind)
