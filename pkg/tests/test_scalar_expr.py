import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from app.shared.calculus.charts import make_chart
from app.shared.calculus.scalar_expr import (
    compile_table,
    eq_randomized,
    eq_randomized_tables,
    eval_at,
    parse,
    partial,
    sample_points,
    to_text,
)
from app.shared.errors import (
    DimensionError,
    EvaluationDomainError,
    ExpressionSyntaxError,
    SamplingExhaustedError,
    UnknownIdentifierError,
)

CHART = make_chart(["x", "y"], [(-1, 1), (-1, 1)], seed=11)
X, Y = CHART.symbols
FD_STEP = 1e-5


def _trees(depth: int):
    """Деревья выражений глубины не больше depth, значения по модулю не больше 1 на [-1, 1]²."""
    leaves = st.sampled_from([X, Y, sp.Integer(1), sp.Rational(1, 2), sp.Rational(-3, 4)])
    if depth == 0:
        return leaves
    sub = _trees(depth - 1)
    return st.one_of(
        leaves,
        st.builds(lambda a, b: (a + b) / 2, sub, sub),
        st.builds(lambda a, b: a * b, sub, sub),
        st.builds(sp.sin, sub),
        st.builds(sp.cos, sub),
        st.builds(lambda a: sp.exp(a) / 3, sub),
        st.builds(lambda a: a / (2 + a**2), sub),
    )


expression_trees = _trees(6)


class TestParse:
    def test_precedence_and_power(self, plane_chart, plane_symbols):
        x, y = plane_symbols
        assert parse("x^2 + 2*x*y", plane_chart) == x**2 + 2 * x * y
        assert parse("-x^2", plane_chart) == -(x**2)
        assert parse("x^-2", plane_chart) == x**-2
        assert parse("2*(x - y)/3", plane_chart) == sp.Rational(2, 3) * (x - y)

    def test_functions(self, plane_chart, plane_symbols):
        x, y = plane_symbols
        assert parse("sin(x)*cos(y) + exp(x*y)", plane_chart) == sp.sin(x) * sp.cos(y) + sp.exp(x * y)
        assert parse("sqrt(x^2 + 1)", plane_chart) == sp.sqrt(x**2 + 1)

    def test_trailing_operator_reports_position(self, plane_chart):
        with pytest.raises(ExpressionSyntaxError) as error:
            parse("x +", plane_chart)
        assert error.value.position == 3

    def test_invalid_character(self, plane_chart):
        with pytest.raises(ExpressionSyntaxError) as error:
            parse("x $ y", plane_chart)
        assert error.value.position == 2

    def test_unknown_identifier(self, plane_chart):
        with pytest.raises(UnknownIdentifierError) as error:
            parse("z + 1", plane_chart)
        assert error.value.name == "z"
        assert error.value.position == 0

    def test_unknown_function(self, plane_chart):
        with pytest.raises(UnknownIdentifierError):
            parse("foo(x)", plane_chart)

    def test_non_integer_exponent_rejected(self, plane_chart):
        with pytest.raises(ExpressionSyntaxError):
            parse("x^1.5", plane_chart)

    def test_division_by_zero_constant(self, plane_chart):
        with pytest.raises(ExpressionSyntaxError):
            parse("1/0", plane_chart)

    @settings(max_examples=60, deadline=None)
    @given(expression_trees)
    def test_printed_tree_parses_back(self, expr):
        assert eq_randomized(parse(to_text(expr), CHART), expr, CHART)

    def test_printed_text_keeps_tree(self, plane_chart):
        expr = parse("log(x^2 + 2) - 5/7 * exp(-x*y)", plane_chart)
        assert parse(to_text(expr), plane_chart) == expr

    def test_partial(self, plane_chart, plane_symbols):
        x, y = plane_symbols
        expr = parse("x^2*sin(y)", plane_chart)
        assert partial(expr, 0, plane_chart) == 2 * x * sp.sin(y)
        assert partial(expr, 1, plane_chart) == x**2 * sp.cos(y)

    @settings(max_examples=40, deadline=None)
    @given(expression_trees)
    def test_partial_matches_central_difference(self, expr):
        table = compile_table([expr, partial(expr, 0, CHART), partial(expr, 1, CHART)], CHART)
        rng = np.random.default_rng(16)
        for point in rng.uniform(-0.9, 0.9, size=(16, 2)):
            exact = table(point)[1:]
            for coord in range(2):
                step = np.zeros(2)
                step[coord] = FD_STEP
                difference = (table(point + step)[0] - table(point - step)[0]) / (2 * FD_STEP)
                assert abs(difference - exact[coord]) <= 1e-6 * (1 + abs(exact[coord]))


class TestEvaluation:
    def test_compiled_table(self, plane_chart, plane_symbols):
        x, y = plane_symbols
        values = compile_table([x * y, sp.sin(x), sp.Integer(3)], plane_chart)([0.5, 2.0])
        assert values[0] == pytest.approx(1.0)
        assert values[1] == pytest.approx(math.sin(0.5))
        assert values[2] == pytest.approx(3.0)

    def test_eval_at(self, plane_chart, plane_symbols):
        x, y = plane_symbols
        assert eval_at(x**2 + y, [0.5, 0.25], plane_chart) == pytest.approx(0.5)

    def test_domain_error_names_the_node(self, plane_chart, plane_symbols):
        x, _ = plane_symbols
        with pytest.raises(EvaluationDomainError) as error:
            compile_table([sp.log(x)], plane_chart)([-0.5, 0.0])
        assert "log" in error.value.node
        assert error.value.point == (-0.5, 0.0)

    def test_wrong_point_dimension(self, plane_chart, plane_symbols):
        x, _ = plane_symbols
        with pytest.raises(DimensionError):
            compile_table([x], plane_chart)([0.1])

    def test_sampling_is_deterministic(self, plane_chart, plane_symbols):
        x, _ = plane_symbols
        first = sample_points(plane_chart, 5, [1 / x])
        second = sample_points(plane_chart, 5, [1 / x])
        assert all((a == b).all() for a, b in zip(first, second))

    def test_sampling_gives_up(self):
        chart = make_chart(["x"], [(-1, -0.5)])
        with pytest.raises(SamplingExhaustedError):
            sample_points(chart, 1, [sp.log(chart.symbols[0])])


class TestRandomizedEquality:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(-5, 5), st.integers(-5, 5))
    def test_binomial_identity(self, a, b):
        chart = make_chart(["x", "y"], [(-1, 1), (-1, 1)])
        x, y = chart.symbols
        assert eq_randomized((a * x + b * y) ** 2, a**2 * x**2 + 2 * a * b * x * y + b**2 * y**2, chart)

    def test_trigonometric_identity(self, plane_chart, plane_symbols):
        x, y = plane_symbols
        assert eq_randomized(sp.sin(x + y), sp.sin(x) * sp.cos(y) + sp.cos(x) * sp.sin(y), plane_chart)

    def test_difference_has_witness(self, plane_chart, plane_symbols):
        x, y = plane_symbols
        verdict = eq_randomized(x, x + y**2 / 1000, plane_chart)
        assert not verdict
        assert verdict.witness is not None
        assert verdict.component == 0

    def test_table_reports_failing_component(self, plane_chart, plane_symbols):
        x, y = plane_symbols
        verdict = eq_randomized_tables([x, y, x * y], [x, y, x * y + 1], plane_chart)
        assert not verdict
        assert verdict.component == 2
