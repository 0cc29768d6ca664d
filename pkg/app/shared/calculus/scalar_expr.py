"""Скалярные выражения над координатами карты: разбор, печать, производные, вычисление."""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Sequence

import numpy as np
import sympy as sp

from app.settings import config
from app.shared.errors import (
    DimensionError,
    EvaluationDomainError,
    ExpressionSyntaxError,
    SamplingExhaustedError,
    UnknownIdentifierError,
)

from .charts import Chart, SamplingDomain

logger = logging.getLogger(__name__)

ScalarExpr = sp.Expr

FUNCTIONS: Dict[str, Callable[[sp.Expr], sp.Expr]] = {
    "sin": sp.sin,
    "cos": sp.cos,
    "tan": sp.tan,
    "exp": sp.exp,
    "log": sp.log,
    "sqrt": sp.sqrt,
    "sinh": sp.sinh,
    "cosh": sp.cosh,
}

_NUMERIC_FUNCTIONS: Dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": math.log,
    "sinh": math.sinh,
    "cosh": math.cosh,
}

_TOKEN_RE = re.compile(
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
)


@dataclass(slots=True, frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    position = 0
    while position < len(text):
        if text[position].isspace():
            position += 1
            continue
        match = _TOKEN_RE.match(text, position)
        if match is None:
            raise ExpressionSyntaxError(f"Недопустимый символ '{text[position]}'", position, text)
        tokens.append(_Token(match.lastgroup, match.group(), position))
        position = match.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


class _ExpressionParser:
    """Рекурсивный спуск по грамматике выражений."""

    def __init__(self, text: str, symbols: Dict[str, sp.Symbol]):
        self.text = text
        self.symbols = symbols
        self.tokens = _tokenize(text)
        self.index = 0

    def parse(self) -> sp.Expr:
        value = self._expr()
        token = self._peek()
        if token.kind != "eof":
            self._fail(f"Лишний символ '{token.text}'", token)
        return value

    def _peek(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _is_op(self, *ops: str) -> bool:
        token = self._peek()
        return token.kind == "op" and token.text in ops

    def _expect(self, op: str) -> None:
        if not self._is_op(op):
            self._fail(f"Ожидается '{op}'", self._peek())
        self._advance()

    def _fail(self, message: str, token: _Token):
        raise ExpressionSyntaxError(message, token.position, self.text)

    def _expr(self) -> sp.Expr:
        value = self._term()
        while self._is_op("+", "-"):
            op = self._advance().text
            right = self._term()
            value = value + right if op == "+" else value - right
        return value

    def _term(self) -> sp.Expr:
        value = self._factor()
        while self._is_op("*", "/"):
            token = self._advance()
            right = self._factor()
            if token.text == "*":
                value = value * right
                continue
            if right == 0:
                self._fail("Деление на нулевую константу", token)
            if not right.is_commutative:
                self._fail("Деление на нечётную координату", token)
            value = value / right
        return value

    def _factor(self) -> sp.Expr:
        base = self._base()
        if not self._is_op("^"):
            return base
        self._advance()
        sign = 1
        if self._is_op("-", "+"):
            sign = -1 if self._advance().text == "-" else 1
        token = self._peek()
        if token.kind != "number" or not token.text.isdigit():
            self._fail("Показатель степени должен быть целым числом", token)
        self._advance()
        exponent = sign * int(token.text)
        if exponent < 0 and (base == 0 or not base.is_commutative):
            self._fail("Отрицательная степень нуля или нечётной координаты", token)
        return sp.Pow(base, sp.Integer(exponent))

    def _base(self) -> sp.Expr:
        token = self._peek()
        if token.kind == "number":
            self._advance()
            return sp.Rational(token.text)
        if token.kind == "ident":
            self._advance()
            return self._identifier(token)
        if self._is_op("("):
            self._advance()
            value = self._expr()
            self._expect(")")
            return value
        if self._is_op("-"):
            self._advance()
            return -self._factor()
        self._fail("Ожидается число, идентификатор или '('", token)

    def _identifier(self, token: _Token) -> sp.Expr:
        name = token.text
        if self._is_op("("):
            if name not in FUNCTIONS:
                raise UnknownIdentifierError(name, token.position)
            self._advance()
            argument = self._expr()
            self._expect(")")
            if not argument.is_commutative:
                self._fail("Нечётная координата внутри функции", token)
            return FUNCTIONS[name](argument)
        if name in self.symbols:
            return self.symbols[name]
        if name in FUNCTIONS:
            self._fail(f"Ожидается '(' после '{name}'", self._peek())
        raise UnknownIdentifierError(name, token.position)


def parse(text: str, chart: Chart) -> ScalarExpr:
    """Разбирает строку выражения над координатами карты."""
    return _ExpressionParser(text, chart.symbol_table()).parse()


# Печать в грамматике выражений


def _is_atomic(expr: sp.Expr) -> bool:
    if expr.is_Symbol or isinstance(expr, sp.Function):
        return True
    return bool(expr.is_Integer and expr >= 0)


def _wrapped(expr: sp.Expr) -> str:
    text = to_text(expr)
    return text if _is_atomic(expr) else f"({text})"


def _product_text(expr: sp.Expr) -> str:
    coefficient, rest = expr.as_coeff_Mul()
    factors = list(sp.Mul.make_args(rest))
    parts = []
    if coefficient == -1:
        prefix = "-"
    else:
        prefix = ""
        if coefficient != 1:
            parts.append(to_text(coefficient))
    for factor in factors:
        parts.append(_wrapped(factor) if factor.is_Add else to_text(factor))
    return prefix + " * ".join(parts)


def to_text(expr) -> str:
    """Печатает выражение так, что parse восстанавливает то же дерево."""
    expr = sp.sympify(expr)
    if expr.is_Symbol:
        return expr.name
    if expr.is_Integer:
        return str(int(expr))
    if expr.is_Rational:
        return f"{expr.p}/{expr.q}"
    if expr is sp.E:
        return "exp(1)"
    if expr.is_Add:
        terms = [to_text(term) for term in sp.Add.make_args(expr)]
        text = terms[0]
        for term in terms[1:]:
            text += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return text
    if expr.is_Mul:
        return _product_text(expr)
    if expr.is_Pow:
        base, exponent = expr.args
        if exponent.is_Integer:
            return f"{_wrapped(base)}^{int(exponent)}"
        if exponent.is_Rational and exponent.q == 2:
            root = f"sqrt({to_text(base)})"
            return root if exponent.p == 1 else f"{root}^{exponent.p}"
    if isinstance(expr, sp.Function) and expr.func.__name__ in FUNCTIONS:
        return f"{expr.func.__name__}({to_text(expr.args[0])})"
    return sp.sstr(expr)


def partial(expr: ScalarExpr, coord: int, chart: Chart) -> ScalarExpr:
    """Точная частная производная по координате с номером coord."""
    return sp.diff(expr, chart.symbol(coord))


# Численное вычисление


def _evaluate_node(node: sp.Expr, env: Dict[sp.Symbol, float], point: Sequence[float]) -> float:
    if node.is_Symbol:
        return env[node]
    if node.is_Number or node.is_NumberSymbol:
        return float(node)
    args = [_evaluate_node(arg, env, point) for arg in node.args]
    try:
        if node.is_Add:
            value = math.fsum(args)
        elif node.is_Mul:
            value = math.prod(args)
        elif node.is_Pow:
            base, exponent = args
            if base == 0 and exponent < 0:
                raise ZeroDivisionError("деление на ноль")
            if base < 0 and not float(exponent).is_integer():
                raise ValueError("корень из отрицательного числа")
            value = base**exponent
        else:
            value = _NUMERIC_FUNCTIONS[node.func.__name__](args[0])
    except (ValueError, ZeroDivisionError, OverflowError, KeyError) as error:
        raise EvaluationDomainError(_label(node), point) from error
    if isinstance(value, complex) or not math.isfinite(value):
        raise EvaluationDomainError(_label(node), point)
    return value


def _label(node: sp.Expr) -> str:
    try:
        return to_text(node)
    except Exception:  # печать не должна маскировать исходную ошибку
        return sp.sstr(node)


def _locate_failure(exprs: Sequence[sp.Expr], chart: Chart, point: Sequence[float]):
    env = dict(zip(chart.symbols, point))
    for expr in exprs:
        _evaluate_node(expr, env, point)
    raise EvaluationDomainError("<numeric overflow>", point)


@lru_cache(maxsize=512)
def _lambdified(exprs: tuple, symbols: tuple):
    return sp.lambdify(symbols, list(exprs), modules="math")


class CompiledTable:
    """Таблица выражений, вычисляемая в точке за один вызов."""

    def __init__(self, exprs: Sequence[ScalarExpr], chart: Chart):
        self.exprs = tuple(sp.sympify(expr) for expr in exprs)
        self.chart = chart
        self._function = _lambdified(self.exprs, chart.symbols)

    def __len__(self) -> int:
        return len(self.exprs)

    def __call__(self, point: Sequence[float]) -> np.ndarray:
        values = tuple(float(value) for value in point)
        if len(values) != len(self.chart.symbols):
            raise DimensionError(
                f"Размерность точки {len(values)} не совпадает с картой ({len(self.chart.symbols)})"
            )
        try:
            result = np.array(self._function(*values), dtype=float)
        except (ValueError, ZeroDivisionError, OverflowError, TypeError):
            _locate_failure(self.exprs, self.chart, values)
        if not np.all(np.isfinite(result)):
            _locate_failure(self.exprs, self.chart, values)
        return result


def compile_table(exprs: Sequence[ScalarExpr], chart: Chart) -> CompiledTable:
    return CompiledTable(exprs, chart)


def eval_at(expr: ScalarExpr, point: Sequence[float], chart: Chart) -> float:
    """Значение выражения в точке (порядок координат карты)."""
    return float(compile_table([expr], chart)(point)[0])


def draw_point(
    domain: SamplingDomain, rng: np.random.Generator, table: CompiledTable | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Точка области, в которой таблица конечна; не более MAX_RETRIES пересэмплирований."""
    last_error = None
    for attempt in range(config.MAX_RETRIES + 1):
        point = domain.sample(rng)
        if table is None:
            return point, np.empty(0)
        try:
            return point, table(point)
        except EvaluationDomainError as error:
            last_error = error
            logger.debug("Пересэмплирование точки (попытка %d): %s", attempt + 1, error)
    raise SamplingExhaustedError(config.MAX_RETRIES, last_error)


def sample_points(
    chart: Chart,
    count: int,
    exprs: Sequence[ScalarExpr] = (),
    seed: int | None = None,
) -> List[np.ndarray]:
    """Детерминированная выборка точек, в которых все exprs определены."""
    rng = chart.domain.sampler(seed)
    table = compile_table(exprs, chart) if exprs else None
    return [draw_point(chart.domain, rng, table)[0] for _ in range(count)]


@dataclass(slots=True, frozen=True)
class EqualityVerdict:
    """Итог случайной проверки равенства; при неудаче хранит точку-свидетель."""

    equal: bool
    witness: tuple[float, ...] | None = None
    lhs: float | None = None
    rhs: float | None = None
    component: int | None = None
    trials: int = 0

    def __bool__(self) -> bool:
        return self.equal


def eq_randomized_tables(
    lhs: Sequence[ScalarExpr],
    rhs: Sequence[ScalarExpr],
    chart: Chart,
    domain: SamplingDomain | None = None,
) -> EqualityVerdict:
    """Покомпонентное сравнение двух таблиц на общей последовательности случайных точек."""
    if len(lhs) != len(rhs):
        raise DimensionError("Таблицы разной длины")
    domain = domain or chart.domain
    pending = [
        index for index, (a, b) in enumerate(zip(lhs, rhs)) if sp.sympify(a) != sp.sympify(b)
    ]
    if not pending:
        return EqualityVerdict(True, trials=domain.trials)

    table = compile_table([lhs[i] for i in pending] + [rhs[i] for i in pending], chart)
    size = len(pending)
    rng = domain.sampler()
    for trial in range(domain.trials):
        point, values = draw_point(domain, rng, table)
        left, right = values[:size], values[size:]
        bound = domain.tolerance * (1.0 + np.maximum(np.abs(left), np.abs(right)))
        failed = np.nonzero(np.abs(left - right) > bound)[0]
        if failed.size:
            position = int(failed[0])
            logger.debug("Равенство нарушено в компоненте %d", pending[position])
            return EqualityVerdict(
                False,
                tuple(float(value) for value in point),
                float(left[position]),
                float(right[position]),
                pending[position],
                trial + 1,
            )
    return EqualityVerdict(True, trials=domain.trials)


def eq_randomized(
    a: ScalarExpr, b: ScalarExpr, chart: Chart, domain: SamplingDomain | None = None
) -> EqualityVerdict:
    """Семантическое равенство выражений по случайным точкам области."""
    return eq_randomized_tables([a], [b], chart, domain)
