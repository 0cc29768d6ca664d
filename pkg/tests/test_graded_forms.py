import time

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from app.shared.calculus.charts import make_chart
from app.shared.calculus.graded_forms import (
    CoordinatePartial,
    FormAlgebra,
    FormDerivation,
    Generator,
    MultiDegree,
    SlotInsertion,
    apply_derivation,
    differential,
    embed_tensor,
    extract_components,
    insert_field,
    insert_insertion,
    kappa,
    koszul_sign,
    lie,
    product,
)
from app.shared.errors import CalculusError, DepthOverflowError, InputError
from app.shared.selftest import ALGEBRA_LAWS, DEPTH3_LAWS, SelfTestService

CHART = make_chart(["x", "y", "th"], [(-1, 1), (-1, 1)], [0, 0, 1])
ALGEBRA = FormAlgebra(CHART, 2)
DEPTH3 = FormAlgebra(CHART, 3)
X, Y = CHART.symbols


def d1(coord):
    return Generator((1,), coord)


def d2(coord):
    return Generator((2,), coord)


def d12(coord):
    return Generator((1, 2), coord)


def _monomial(algebra, generators, a, b, c):
    coefficient = a + b * X + c * X * Y**2
    return algebra.word([Generator(slots, coord) for slots, coord in generators], coefficient or 1)


def _monomials(algebra, slot_sets):
    return st.builds(
        _monomial,
        st.just(algebra),
        st.lists(st.tuples(st.sampled_from(slot_sets), st.integers(0, 2)), max_size=3),
        st.integers(-3, 3),
        st.integers(-3, 3),
        st.integers(-3, 3),
    )


monomials = _monomials(ALGEBRA, [(1,), (2,), (1, 2)])
depth3_monomials = _monomials(DEPTH3, [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)])


class TestKoszulSigns:
    def test_same_slot_one_forms_anticommute(self):
        assert ALGEBRA.word([d1(1), d1(0)]) == ALGEBRA.word([d1(0), d1(1)], -1)

    def test_different_slots_commute(self):
        assert ALGEBRA.word([d2(0), d1(1)]) == ALGEBRA.word([d1(1), d2(0)])

    def test_squares(self):
        assert product(ALGEBRA.generator((1,), 0), ALGEBRA.generator((1,), 0)).is_zero()
        assert not product(ALGEBRA.generator((1, 2), 0), ALGEBRA.generator((1, 2), 0)).is_zero()
        # d1 от нечётной координаты чётна в сумме степеней
        assert not product(ALGEBRA.generator((1,), 2), ALGEBRA.generator((1,), 2)).is_zero()

    def test_koszul_sign_values(self):
        one_form = MultiDegree.of_slots((1,), 2)
        mixed = MultiDegree.of_slots((1, 2), 2)
        odd = MultiDegree.of_slots((2,), 2, parity=1)
        assert koszul_sign(one_form, one_form) == -1
        assert koszul_sign(one_form, mixed) == -1
        assert koszul_sign(mixed, mixed) == 1
        assert koszul_sign(odd, odd) == 1

    def test_depth_overflow(self):
        with pytest.raises(DepthOverflowError):
            ALGEBRA.generator((3,), 0)

    def test_inhomogeneous_degree(self):
        form = ALGEBRA.generator((1,), 0) + ALGEBRA.generator((2,), 1)
        with pytest.raises(CalculusError):
            form.degree()


class TestDifferentials:
    def test_differential_of_function(self):
        form = differential(1, ALGEBRA.scalar(X**2 * Y))
        assert form.coefficient([d1(0)]) == 2 * X * Y
        assert form.coefficient([d1(1)]) == X**2

    def test_nilpotent_on_functions(self):
        f = ALGEBRA.scalar(sp.sin(X * Y) + X**3)
        assert differential(1, differential(1, f)).expand().is_zero()
        assert differential(2, differential(2, f)).expand().is_zero()

    def test_differentials_commute(self):
        f = ALGEBRA.scalar(sp.exp(X) * Y**2)
        assert (differential(1, differential(2, f)) - differential(2, differential(1, f))).expand().is_zero()

    def test_differential_raises_generator(self):
        form = differential(2, ALGEBRA.generator((1,), 0))
        assert form == ALGEBRA.generator((1, 2), 0)

    def test_kappa_swaps_slots(self):
        form = ALGEBRA.word([d1(0), d2(1)], X)
        assert kappa(form) == ALGEBRA.word([d2(0), d1(1)], X)
        assert kappa(kappa(form)) == form

    def test_kappa_requires_depth_two(self):
        algebra = FormAlgebra(CHART, 3)
        with pytest.raises(InputError):
            kappa(algebra.generator((3,), 0))

    def test_lie_derivative_of_function(self):
        field = [Y, X**2, 0]
        f = ALGEBRA.scalar(X * Y)
        result = lie(field, f)
        assert sp.expand(result.terms[()] - (Y * Y + X**2 * X)) == 0

    def test_insert_insertion(self):
        assert insert_insertion(0, ALGEBRA.word([d12(0)], X)) == ALGEBRA.scalar(X)
        # i_{S,∂} степени (-1,-1) проходит d1x со знаком
        assert insert_insertion(0, ALGEBRA.word([d1(1), d12(0)], Y)) == ALGEBRA.word([d1(1)], -Y)


class TestDerivations:
    def test_partial_term(self):
        derivation = FormDerivation(ALGEBRA).with_term(ALGEBRA.generator((2,), 1), CoordinatePartial(0))
        result = apply_derivation(derivation, ALGEBRA.scalar(X**2 * Y))
        assert result == ALGEBRA.word([d2(1)], 2 * X * Y)

    def test_insertion_term(self):
        derivation = FormDerivation(ALGEBRA).with_term(ALGEBRA.scalar(Y), SlotInsertion((1,), 0))
        result = apply_derivation(derivation, ALGEBRA.word([d1(0), d2(1)], X))
        assert result == ALGEBRA.word([d2(1)], X * Y)

    def test_sum_and_zero_coefficients(self):
        first = FormDerivation(ALGEBRA).with_term(ALGEBRA.scalar(1), CoordinatePartial(1))
        second = FormDerivation(ALGEBRA).with_term(ALGEBRA.zero(), CoordinatePartial(0))
        assert second.terms == ()
        result = apply_derivation(first + second, ALGEBRA.scalar(X * Y**2))
        assert result == ALGEBRA.scalar(2 * X * Y)


class TestEmbedding:
    def test_round_trip(self):
        table = sp.Array([[X, Y, 0], [X * Y, X**2, 0], [0, 0, 0]])
        form = embed_tensor(ALGEBRA, table)
        assert extract_components(form, 2) == table

    def test_odd_odd_component_picks_up_sign(self):
        table = sp.Array([[0, 0, 0], [0, 0, 0], [0, 0, X]])
        extracted = extract_components(embed_tensor(ALGEBRA, table), 2)
        assert extracted[2, 2] == -X

    def test_insert_field(self):
        form = ALGEBRA.word([d1(0)], X**2)
        result = insert_field(1, [Y, 1, 0], form)
        assert result.terms == {(): X**2 * Y}

    def test_scalar_embedding(self):
        assert embed_tensor(ALGEBRA, X) == ALGEBRA.scalar(X)
        assert extract_components(ALGEBRA.scalar(X), 0) == X


class TestAlgebraLaws:
    @pytest.mark.parametrize("law", sorted(ALGEBRA_LAWS))
    @settings(max_examples=30, deadline=None)
    @given(a=monomials, b=monomials, c=monomials)
    def test_law(self, law, a, b, c):
        assert ALGEBRA_LAWS[law](ALGEBRA, a, b, c)

    @pytest.mark.parametrize("law", sorted(DEPTH3_LAWS))
    @settings(max_examples=20, deadline=None)
    @given(a=depth3_monomials, b=depth3_monomials, c=depth3_monomials)
    def test_depth3_law(self, law, a, b, c):
        assert DEPTH3_LAWS[law](DEPTH3, a, b, c)

    def test_kappa_conjugates_second_differential(self):
        form = ALGEBRA.word([d1(0)], X * Y)
        assert kappa(differential(2, kappa(form))) == differential(1, form)

    def test_kappa_is_multiplicative(self):
        first = ALGEBRA.word([d1(0)], X)
        second = ALGEBRA.word([d2(1), d1(2)], Y)
        assert kappa(product(first, second)) == product(kappa(first), kappa(second))

    def test_insertion_leibniz_sign(self):
        first = ALGEBRA.word([d12(0)], X)
        second = ALGEBRA.word([d1(1)], Y)
        result = insert_insertion(0, product(first, second))
        assert result == product(insert_insertion(0, first), second)
        assert result == ALGEBRA.word([d1(1)], X * Y)

    def test_depth3_differentials(self):
        f = DEPTH3.scalar(X**2 * Y)
        assert differential(3, differential(3, f)).expand().is_zero()
        form = DEPTH3.word([Generator((2,), 0)], X * Y)
        mixed = differential(1, differential(3, form))
        assert (mixed - differential(3, differential(1, form))).expand().is_zero()

    def test_selftest_battery(self):
        details = SelfTestService().check_algebra_laws(instances=120, seed=1)
        assert details["passed"], details["failures"]
        assert details["laws"] == len(ALGEBRA_LAWS) + len(DEPTH3_LAWS)

    def test_selftest_battery_fits_time_budget(self):
        # 10⁴ экземпляров за 30 с
        started = time.perf_counter()
        details = SelfTestService().check_algebra_laws(instances=1000, seed=2)
        elapsed = time.perf_counter() - started
        assert details["passed"], details["failures"]
        assert elapsed < 3.0
