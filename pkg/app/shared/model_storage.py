"""Загрузка и проверка файлов моделей (JSON) и встроенных моделей builtin:<имя>."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Sequence

import sympy as sp

from app.settings import config
from app.shared.calculus.charts import Chart, make_chart
from app.shared.calculus.connection import TensorField2, make_tensor_field
from app.shared.calculus.scalar_expr import parse
from app.shared.calculus.supergeometry import SuperMetric, make_super_metric
from app.shared.errors import ExpressionSyntaxError, InputError, ModelSchemaError, UnknownIdentifierError

from .models_data import BUILTIN_MODELS, MAX_DEPTH

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"
_OPTION_TYPES = {"seed": int, "trials": int, "tol": float, "depth": int}


@dataclass(frozen=True)
class ModelFile:
    """Проверенная модель: карта, матрица τ (строки и выражения), параметры."""

    name: str
    chart: Chart
    texts: tuple[tuple[str, ...], ...]
    tau: sp.ImmutableMatrix
    options: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_super(self) -> bool:
        return self.chart.is_super

    def tensor_field(self) -> TensorField2:
        if self.is_super:
            raise InputError(f"Модель {self.name} задаёт суперметрику; используйте супервычисления")
        return make_tensor_field(self.chart, self.tau)

    @property
    def depth(self) -> int:
        return int(self.options.get("depth", default_options()["depth"]))

    def super_metric(self) -> SuperMetric:
        return make_super_metric(self.chart, self.texts)

    def with_overrides(self, seed: int | None = None, trials: int | None = None) -> "ModelFile":
        if seed is None and trials is None:
            return self
        domain = self.chart.domain.with_options(seed=seed, trials=trials)
        chart = replace(self.chart, domain=domain)
        options = dict(self.options)
        options.update({k: v for k, v in (("seed", seed), ("trials", trials)) if v is not None})
        return ModelFile(self.name, chart, self.texts, self.tau, options)


# Проверка схемы


def default_options() -> Dict[str, Any]:
    """Параметры модели по умолчанию из окружения ITERFORMS_*."""
    return {
        "seed": config.SEED,
        "trials": config.TRIALS,
        "tol": config.TOLERANCE,
        "depth": min(config.DEPTH_CAP, MAX_DEPTH),
    }


def _require(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise ModelSchemaError(path, message)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _validate_chart(raw: Any) -> tuple[List[str], List[int], List[tuple[float, float]]]:
    _require(isinstance(raw, dict), "chart", "ожидается объект")
    coords = raw.get("coords")
    _require(isinstance(coords, list) and coords, "chart.coords", "ожидается непустой список имён")
    for i, name in enumerate(coords):
        _require(isinstance(name, str) and name.isidentifier(), f"chart.coords[{i}]", "ожидается имя")
    _require(len(set(coords)) == len(coords), "chart.coords", "имена координат повторяются")

    parities = raw.get("parities", [0] * len(coords))
    _require(isinstance(parities, list), "chart.parities", "ожидается список")
    _require(len(parities) == len(coords), "chart.parities", "длина не совпадает с числом координат")
    for i, parity in enumerate(parities):
        _require(parity in (0, 1) and not isinstance(parity, bool), f"chart.parities[{i}]", "ожидается 0 или 1")

    domain = raw.get("domain", {})
    _require(isinstance(domain, dict), "chart.domain", "ожидается объект")
    intervals = []
    for name, parity in zip(coords, parities):
        path = f"chart.domain.{name}"
        if parity:
            _require(name not in domain, path, "нечётная координата не сэмплируется")
            continue
        interval = domain.get(name)
        _require(
            isinstance(interval, list) and len(interval) == 2 and all(_is_number(v) for v in interval),
            path,
            "ожидается отрезок [lo, hi]",
        )
        _require(interval[0] <= interval[1], path, "lo больше hi")
        intervals.append((float(interval[0]), float(interval[1])))
    for name in domain:
        _require(name in coords, f"chart.domain.{name}", "неизвестная координата")
    return coords, parities, intervals


def _validate_matrix(raw: Any, key: str, n: int) -> List[List[str]]:
    _require(isinstance(raw, list) and len(raw) == n, key, f"ожидается матрица {n}×{n}")
    rows = []
    for i, row in enumerate(raw):
        _require(isinstance(row, list) and len(row) == n, f"{key}[{i}]", f"ожидается строка длины {n}")
        cells = []
        for j, cell in enumerate(row):
            _require(isinstance(cell, str) or _is_number(cell), f"{key}[{i}][{j}]", "ожидается строка выражения")
            cells.append(str(cell))
        rows.append(cells)
    return rows


def _validate_options(raw: Any) -> Dict[str, Any]:
    _require(isinstance(raw, dict), "options", "ожидается объект")
    options = default_options()
    for key, value in raw.items():
        path = f"options.{key}"
        _require(key in _OPTION_TYPES, path, "неизвестный параметр")
        expected = _OPTION_TYPES[key]
        valid = _is_number(value) if expected is float else isinstance(value, int) and not isinstance(value, bool)
        _require(valid, path, f"ожидается {expected.__name__}")
        options[key] = expected(value)
    _require(options["trials"] >= 1, "options.trials", "должно быть не меньше 1")
    _require(options["tol"] > 0, "options.tol", "должно быть положительным")
    _require(1 <= options["depth"] <= MAX_DEPTH, "options.depth", f"ожидается от 1 до {MAX_DEPTH}")
    return options


def _parse_matrix(rows: Sequence[Sequence[str]], key: str, chart: Chart) -> List[List[sp.Expr]]:
    parsed = []
    for i, row in enumerate(rows):
        parsed_row = []
        for j, text in enumerate(row):
            try:
                parsed_row.append(parse(text, chart))
            except (ExpressionSyntaxError, UnknownIdentifierError) as error:
                raise ModelSchemaError(f"{key}[{i}][{j}]", str(error)) from error
        parsed.append(parsed_row)
    return parsed


def _require_skew(omega: sp.Matrix) -> None:
    n = omega.shape[0]
    for i in range(n):
        for j in range(i, n):
            if sp.expand(omega[i, j] + omega[j, i]) != 0:
                message = f"матрица не антисимметрична: omega[{i}][{j}] + omega[{j}][{i}] ≠ 0"
                raise ModelSchemaError("omega", message)


def build_model(name: str, raw: Any) -> ModelFile:
    """Проверяет словарь модели по схеме и собирает ModelFile."""
    _require(isinstance(raw, dict), "$", "ожидается объект")
    for key in raw:
        _require(key in ("chart", "tau", "metric", "omega", "options"), key, "неизвестное поле")
    _require("chart" in raw, "chart", "обязательное поле")
    coords, parities, intervals = _validate_chart(raw["chart"])
    n = len(coords)
    _require(("tau" in raw) != ("metric" in raw), "tau", "нужно ровно одно из полей tau или metric")
    _require(not ("omega" in raw and "tau" in raw), "omega", "omega задаётся только вместе с metric")
    options = _validate_options(raw.get("options", {}))

    chart = make_chart(
        coords,
        intervals,
        parities,
        seed=options["seed"],
        trials=options["trials"],
        tolerance=options["tol"],
    )
    key = "tau" if "tau" in raw else "metric"
    texts = _validate_matrix(raw[key], key, n)
    matrix = sp.Matrix(_parse_matrix(texts, key, chart))
    if "omega" in raw:
        _require(not chart.is_super, "omega", "не поддерживается для суперкарт")
        omega_texts = _validate_matrix(raw["omega"], "omega", n)
        omega = sp.Matrix(_parse_matrix(omega_texts, "omega", chart))
        _require_skew(omega)
        matrix = matrix + omega
        texts = [[f"{a} + ({b})" for a, b in zip(row_a, row_b)] for row_a, row_b in zip(texts, omega_texts)]
    logger.debug(f"Модель {name}: {n} координат, нечётных {sum(parities)}")
    return ModelFile(name, chart, tuple(map(tuple, texts)), sp.ImmutableMatrix(matrix), options)


def load_model(path: str) -> ModelFile:
    """Читает модель из файла или из встроенной библиотеки (builtin:<имя>)."""
    if path.startswith(BUILTIN_PREFIX):
        name = path[len(BUILTIN_PREFIX) :]
        if name not in BUILTIN_MODELS:
            known = ", ".join(sorted(BUILTIN_MODELS))
            raise InputError(f"Неизвестная встроенная модель '{name}'. Доступны: {known}")
        return build_model(path, BUILTIN_MODELS[name])

    file_path = Path(path)
    if not file_path.exists():
        raise InputError(f"Файл модели не найден: {path}")
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as error:
        raise ModelSchemaError("$", f"некорректный JSON: {error.msg} (строка {error.lineno})") from error
    logger.info(f"Модель загружена из {file_path}")
    return build_model(str(file_path), raw)


def builtin_names() -> List[str]:
    return list(BUILTIN_MODELS)
