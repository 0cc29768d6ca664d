"""Суперметрики: грассмановы скаляры, обратная суперматрица, суперсимволы Кристоффеля и тензор Римана.

Нечётные координаты не сэмплируются: тождества проверяются по каждому грассманову
моному, коэффициенты которого зависят только от чётных координат.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import sympy as sp

from app.shared.errors import InputError

from .charts import Chart
from .connection import inverse_metric
from .scalar_expr import ScalarExpr, eq_randomized_tables, parse, to_text

logger = logging.getLogger(__name__)

OddKey = Tuple[int, ...]


def _merge_sign(left: OddKey, right: OddKey) -> tuple[int, OddKey | None]:
    """Знак переупорядочивания θ_left θ_right к возрастающему порядку."""
    if set(left) & set(right):
        return 0, None
    inversions = sum(1 for a in left for b in right if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(left + right))


@dataclass(frozen=True, eq=False)
class SuperScalar:
    """Элемент C^∞(чётные) ⊗ Λ(нечётные): ключи: возрастающие наборы нечётных индексов."""

    terms: Mapping[OddKey, ScalarExpr]

    @classmethod
    def of(cls, terms: Mapping[OddKey, ScalarExpr]) -> "SuperScalar":
        return cls({key: sp.sympify(value) for key, value in terms.items() if sp.sympify(value) != 0})

    @classmethod
    def constant(cls, value) -> "SuperScalar":
        return cls.of({(): value})

    @classmethod
    def zero(cls) -> "SuperScalar":
        return cls({})

    @classmethod
    def odd(cls, coord: int) -> "SuperScalar":
        return cls({(coord,): sp.Integer(1)})

    def __add__(self, other: "SuperScalar") -> "SuperScalar":
        result = dict(self.terms)
        for key, value in other.terms.items():
            result[key] = result.get(key, sp.Integer(0)) + value
        return SuperScalar.of(result)

    def __neg__(self) -> "SuperScalar":
        return self.scale(-1)

    def __sub__(self, other: "SuperScalar") -> "SuperScalar":
        return self + (-other)

    def __mul__(self, other) -> "SuperScalar":
        if isinstance(other, SuperScalar):
            return super_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "SuperScalar":
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperScalar):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    def scale(self, factor) -> "SuperScalar":
        factor = sp.sympify(factor)
        return SuperScalar.of({key: factor * value for key, value in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def body(self) -> ScalarExpr:
        return self.terms.get((), sp.Integer(0))

    def soul(self) -> "SuperScalar":
        return SuperScalar({key: value for key, value in self.terms.items() if key})

    def coefficient(self, key: OddKey) -> ScalarExpr:
        return self.terms.get(tuple(key), sp.Integer(0))

    def parities(self) -> set[int]:
        return {len(key) % 2 for key in self.terms}

    def to_text(self, chart: Chart) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=lambda k: (len(k), k)):
            monomial = "*".join(chart.names[i] for i in key)
            coeff = to_text(self.terms[key])
            parts.append(f"({coeff})*{monomial}" if monomial else coeff)
        return " + ".join(parts)


def super_mul(a: SuperScalar, b: SuperScalar) -> SuperScalar:
    result: Dict[OddKey, ScalarExpr] = {}
    for left, left_coeff in a.terms.items():
        for right, right_coeff in b.terms.items():
            sign, key = _merge_sign(left, right)
            if key is not None:
                result[key] = result.get(key, sp.Integer(0)) + sign * left_coeff * right_coeff
    return SuperScalar.of(result)


def super_partial(a: SuperScalar, coord: int, chart: Chart) -> SuperScalar:
    """Левая производная: ∂_θ проходит через предшествующие нечётные множители со знаком."""
    if not chart.parities[coord]:
        symbol = chart.symbol(coord)
        return SuperScalar.of({key: sp.diff(value, symbol) for key, value in a.terms.items()})
    result: Dict[OddKey, ScalarExpr] = {}
    for key, value in a.terms.items():
        if coord in key:
            position = key.index(coord)
            reduced = key[:position] + key[position + 1 :]
            result[reduced] = result.get(reduced, sp.Integer(0)) + (-1) ** position * value
    return SuperScalar.of(result)


def _from_expression(expr: ScalarExpr, chart: Chart) -> SuperScalar:
    """Раскладывает выражение с некоммутативными нечётными символами по грассмановым мономам."""
    odd_symbols = {chart.symbol_table()[chart.names[i]]: i for i in chart.odd_indices}
    result = SuperScalar.zero()
    for term in sp.Add.make_args(sp.expand(expr)):
        commutative, ordered = term.args_cnc()
        factor = SuperScalar.constant(sp.Mul(*commutative))
        for item in ordered:
            if item not in odd_symbols:
                # θ^k при k ≥ 2 обращается в ноль
                factor = SuperScalar.zero()
                break
            factor = super_mul(factor, SuperScalar.odd(odd_symbols[item]))
        result = result + factor
    return result


def parse_super(text: str, chart: Chart) -> SuperScalar:
    return _from_expression(parse(text, chart), chart)


def super_equal(a: SuperScalar, b: SuperScalar, chart: Chart) -> bool:
    keys = sorted(set(a.terms) | set(b.terms))
    lhs = [a.coefficient(key) for key in keys]
    rhs = [b.coefficient(key) for key in keys]
    return bool(eq_randomized_tables(lhs, rhs, chart))


# Суперметрика


SuperMatrix = List[List[SuperScalar]]


@dataclass(frozen=True)
class SuperMetric:
    chart: Chart
    g: tuple[tuple[SuperScalar, ...], ...]
    g_inv: tuple[tuple[SuperScalar, ...], ...]

    @property
    def dimension(self) -> int:
        return self.chart.dimension

    @property
    def parities(self) -> tuple[int, ...]:
        return self.chart.parities


def _matmul(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    n = len(a)
    return [
        [sum((super_mul(a[i][k], b[k][j]) for k in range(n)), SuperScalar.zero()) for j in range(n)]
        for i in range(n)
    ]


def super_inverse_metric(g: Sequence[Sequence[SuperScalar]], chart: Chart) -> SuperMatrix:
    """g^{μν} из (−1)^{γ̄ᾱ} g_{να} g^{νγ} = δ^γ_α: G = (gᵀ)^{-1} · diag((−1)^ᾱ)."""
    n = chart.dimension
    transposed = [[g[j][i] for j in range(n)] for i in range(n)]
    body = sp.Matrix(n, n, lambda i, j: transposed[i][j].body)
    body_inverse = inverse_metric(body, chart)
    a = [[SuperScalar.constant(body_inverse[i, j]) for j in range(n)] for i in range(n)]
    nilpotent = [[transposed[i][j].soul() for j in range(n)] for i in range(n)]
    step = [[-entry for entry in row] for row in _matmul(a, nilpotent)]
    inverse, power = a, a
    # ряд обрывается: степень соула ограничена числом нечётных координат
    for _ in range(len(chart.odd_indices)):
        power = _matmul(step, power)
        if all(entry.is_zero() for row in power for entry in row):
            break
        inverse = [[inverse[i][j] + power[i][j] for j in range(n)] for i in range(n)]
    signs = [(-1) ** parity for parity in chart.parities]
    return [[inverse[i][j].scale(signs[j]) for j in range(n)] for i in range(n)]


def make_super_metric(chart: Chart, entries: Sequence[Sequence]) -> SuperMetric:
    """Собирает суперметрику из строк или SuperScalar; проверяет градуированную симметрию и чётность."""
    n = chart.dimension
    if len(entries) != n or any(len(row) != n for row in entries):
        raise InputError("Размер суперметрики не совпадает с размерностью карты")
    g = [
        [entry if isinstance(entry, SuperScalar) else parse_super(str(entry), chart) for entry in row]
        for row in entries
    ]
    parities = chart.parities
    for mu, nu in itertools.product(range(n), repeat=2):
        expected = (parities[mu] + parities[nu]) % 2
        if g[mu][nu].parities() - {expected}:
            raise InputError(f"Компонента g[{mu}][{nu}] имеет неверную чётность")
        if mu < nu:
            mirrored = g[nu][mu].scale((-1) ** (parities[mu] * parities[nu]))
            if not super_equal(g[mu][nu], mirrored, chart):
                raise InputError(f"Нарушена градуированная симметрия g[{mu}][{nu}]")
    inverse = super_inverse_metric(g, chart)
    logger.debug("Суперметрика %d×%d, нечётных координат: %d", n, n, len(chart.odd_indices))
    return SuperMetric(chart, tuple(map(tuple, g)), tuple(map(tuple, inverse)))


# Суперсимволы Кристоффеля и тензор Римана


SuperTable = Dict[Tuple[int, ...], SuperScalar]


def christoffel_signs(parities: Sequence[int]) -> tuple[list, list]:
    """Знаки первых двух слагаемых: first[μ][γ] и second[μ][β][γ]."""
    p = parities
    n = len(p)
    first = [[(-1) ** (p[g] * p[g] + p[m] * (p[m] + p[g])) for g in range(n)] for m in range(n)]
    second = [
        [[(-1) ** (p[g] * p[g] + p[b] * (p[m] + p[b] + p[g])) for g in range(n)] for b in range(n)]
        for m in range(n)
    ]
    return first, second


def super_christoffel(metric: SuperMetric) -> SuperTable:
    """Γ[α, μ, β] = ½ g^{γα}[s₁ ∂_μ g_{βγ} + s₂ ∂_β g_{μγ} − ∂_γ g_{βμ}]."""
    chart = metric.chart
    n = metric.dimension
    first, second = christoffel_signs(chart.parities)
    derivatives = {
        (k, i, j): super_partial(metric.g[i][j], k, chart)
        for k, i, j in itertools.product(range(n), repeat=3)
    }
    table: SuperTable = {}
    for alpha, mu, beta in itertools.product(range(n), repeat=3):
        total = SuperScalar.zero()
        for gamma in range(n):
            bracket = (
                derivatives[(mu, beta, gamma)].scale(first[mu][gamma])
                + derivatives[(beta, mu, gamma)].scale(second[mu][beta][gamma])
                - derivatives[(gamma, beta, mu)]
            )
            if bracket.is_zero():
                continue
            total = total + super_mul(metric.g_inv[gamma][alpha], bracket)
        table[(alpha, mu, beta)] = total.scale(sp.Rational(1, 2))
    return table


def super_riemann(metric: SuperMetric, gamma: SuperTable | None = None) -> SuperTable:
    """R[γ, β, α, ν] = R_{γβ}{}_α^ν по формуле с градуированными знаками."""
    chart = metric.chart
    p = chart.parities
    n = metric.dimension
    gamma = gamma if gamma is not None else super_christoffel(metric)
    table: SuperTable = {}
    for g_, b, a, v in itertools.product(range(n), repeat=4):
        total = super_partial(gamma[(v, a, g_)], b, chart).scale(
            (-1) ** (p[a] * (p[b] + p[g_]) + p[b] * (p[b] + p[v]))
        )
        total = total - super_partial(gamma[(v, a, b)], g_, chart).scale(
            (-1) ** (p[b] * (p[b] + p[g_] + p[v]))
        )
        for m in range(n):
            total = total + super_mul(gamma[(v, m, b)], gamma[(m, a, g_)]).scale(
                (-1) ** (p[m] * p[b] + p[a] * p[g_])
            )
            total = total - super_mul(gamma[(v, m, g_)], gamma[(m, a, b)]).scale(
                (-1) ** (p[b] * (p[a] + p[g_]) + p[m] * p[g_])
            )
        table[(g_, b, a, v)] = total
    logger.debug("Суперриман: %d компонент", len(table))
    return table


def super_parity_check(table: SuperTable, chart: Chart) -> List[Tuple[int, ...]]:
    """Индексы компонент, чётность которых не равна сумме чётностей индексов."""
    violations = []
    for index, value in table.items():
        expected = sum(chart.parities[i] for i in index) % 2
        for key, coeff in value.terms.items():
            if len(key) % 2 == expected:
                continue
            if not eq_randomized_tables([coeff], [sp.Integer(0)], chart):
                violations.append(index)
                break
    return violations


def riemann_exchange_defect(table: SuperTable, chart: Chart) -> SuperTable:
    """R[γ, β] + (−1)^{β̄γ̄} R[β, γ]: ноль при градуированной антисимметрии."""
    p = chart.parities
    return {
        (g_, b, a, v): value + table[(b, g_, a, v)].scale((-1) ** (p[b] * p[g_]))
        for (g_, b, a, v), value in table.items()
    }


def is_zero_table(table: SuperTable, chart: Chart) -> bool:
    """Все грассмановы коэффициенты таблицы равны нулю на случайных точках."""
    coefficients = [coeff for value in table.values() for coeff in value.terms.values()]
    return bool(eq_randomized_tables(coefficients, [sp.Integer(0)] * len(coefficients), chart))
