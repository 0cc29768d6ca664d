"""Невязки Ric(τ) = 0 и расщеплённой системы."""

import pytest
import sympy as sp

from app.shared.calculus.connection import make_tensor_field
from app.shared.calculus.conventions_data import EXPECTED_FITS
from app.shared.calculus.relativity import (
    REFERENCE_QUADRATIC_CONSTANT,
    decomposition_check,
    einstein_split_residual,
    natural_residual,
)
from app.shared.model_storage import load_model


@pytest.fixture(scope="module")
def flat_omega4_field():
    return load_model("builtin:flat4-omega").tensor_field()


@pytest.fixture(scope="module")
def closed_shift_field():
    """flat4-omega, где к ω добавлена точная форма d(x1 x2 dx3): dω не меняется."""
    model = load_model("builtin:flat4-omega")
    x1, x2, _, _ = model.chart.symbols
    shift = sp.zeros(4, 4)
    shift[0, 2], shift[2, 0] = x2, -x2
    shift[1, 2], shift[2, 1] = x1, -x1
    return make_tensor_field(model.chart, model.tau + shift)


SHIFT_POINTS = [[0.2, -0.3, 0.9, 0.1], [-0.5, 0.4, 1.2, 0.7], [0.8, 0.1, 0.6, -0.4]]


class TestNaturalResidual:
    def test_schwarzschild_vacuum(self, schwarzschild_field):
        report = natural_residual(schwarzschild_field)
        assert report.passed
        assert report.max_residual < 1e-8
        assert report.equations[0].name == "ricci"

    def test_sphere_is_not_ricci_flat(self, sphere_field):
        report = natural_residual(sphere_field, count=4)
        assert not report.passed
        assert report.points == 4
        assert report.max_residual == pytest.approx(1.0)
        assert report.equations[0].worst_component == "theta theta"

    def test_explicit_points(self, schwarzschild_field):
        report = natural_residual(schwarzschild_field, points=[[1.0, 4.0, 1.0, 1.0]])
        assert report.points == 1
        assert report.equations[0].worst_point == (1.0, 4.0, 1.0, 1.0)

    def test_report_dict(self, schwarzschild_field):
        data = natural_residual(schwarzschild_field, count=2).as_dict()
        assert data["passed"] is True
        assert set(data["equations"][0]) == {"name", "max_residual", "worst_point", "worst_component", "components"}
        assert "r r" in data["equations"][0]["components"]


class TestEinsteinSplit:
    def test_vacuum_without_omega(self, schwarzschild_field):
        report = einstein_split_residual(schwarzschild_field, count=5)
        assert report.passed
        assert [eq.name for eq in report.equations] == ["einstein", "divergence"]

    def test_omega_sources_the_split_system(self, flat_omega4_field):
        report = einstein_split_residual(flat_omega4_field, count=5)
        assert not report.passed


class TestDecomposition:
    def test_fitted_constants(self, flat_omega4_field):
        report = decomposition_check(flat_omega4_field, count=8)
        assert report.passed
        assert report.antisymmetric.constant == pytest.approx(EXPECTED_FITS["antisymmetric"], abs=1e-9)
        assert report.symmetric.constant == pytest.approx(EXPECTED_FITS["symmetric"], abs=1e-9)
        assert report.symmetric.std < 1e-9

    def test_quadratic_constant_differs_from_reference(self, flat_omega4_field):
        report = decomposition_check(flat_omega4_field, count=4)
        assert report.symmetric.reference == REFERENCE_QUADRATIC_CONSTANT
        assert report.symmetric.deviates
        assert report.as_dict()["symmetric"]["deviates_from_reference"] is True

    def test_undetermined_without_omega(self, sphere_field):
        report = decomposition_check(sphere_field, count=4)
        assert not report.antisymmetric.determined
        assert not report.symmetric.determined
        assert report.passed

    @pytest.mark.slow
    def test_schwarzschild_with_polynomial_omega(self):
        field_ = load_model("builtin:schwarzschild-omega").tensor_field()
        report = decomposition_check(field_, count=6)
        assert report.passed
        assert report.antisymmetric.residual < 1e-8
        assert report.symmetric.residual < 1e-8
        assert report.antisymmetric.constant == pytest.approx(EXPECTED_FITS["antisymmetric"], abs=1e-6)
        assert report.symmetric.constant == pytest.approx(EXPECTED_FITS["symmetric"], abs=1e-6)


class TestExactOmegaShift:
    def test_shift_changes_omega(self, closed_shift_field, flat_omega4_field):
        assert closed_shift_field.omega != flat_omega4_field.omega

    @pytest.mark.parametrize("check", [natural_residual, einstein_split_residual])
    def test_residuals_depend_only_on_d_omega(self, check, closed_shift_field, flat_omega4_field):
        base = check(flat_omega4_field, points=SHIFT_POINTS)
        shifted = check(closed_shift_field, points=SHIFT_POINTS)
        for first, second in zip(base.equations, shifted.equations):
            assert second.max_residual == pytest.approx(first.max_residual, abs=1e-12)
            assert second.components == pytest.approx(first.components, abs=1e-12)

    def test_decomposition_is_unchanged(self, closed_shift_field, flat_omega4_field):
        base = decomposition_check(flat_omega4_field, points=SHIFT_POINTS)
        shifted = decomposition_check(closed_shift_field, points=SHIFT_POINTS)
        assert shifted.antisymmetric.constant == pytest.approx(base.antisymmetric.constant, abs=1e-9)
        assert shifted.symmetric.constant == pytest.approx(base.symmetric.constant, abs=1e-9)
