"""Связность τ = g + ω: символы, кручение, кривизна, башня ∇."""

import pytest
import sympy as sp

from app.shared.calculus.charts import make_chart
from app.shared.calculus.connection import (
    Connection,
    antisymmetrize,
    christoffel_first,
    christoffel_form,
    christoffel_form_components,
    closing_identity_tables,
    covariant_derivative,
    curvature_commutator_oracle,
    inverse_metric,
    levi_civita_form_operator,
    levi_civita_symbols,
    lowered_torsion,
    make_tensor_field,
    metric_form,
    metric_pairing,
    nabla_tower,
    ricci,
    split,
    table_entries,
    tables_agree,
    torsion,
    torsion_form,
)
from app.shared.calculus.graded_forms import Generator, kappa
from app.shared.errors import DegenerateMetricError, InputError, TorsionMismatchError
from app.shared.model_storage import load_model
from app.shared.selftest import SelfTestService


class TestMetric:
    def test_split(self, plane_chart, plane_symbols):
        x, _ = plane_symbols
        g, omega = split(sp.Matrix([[1, x], [0, 1]]))
        assert g == sp.ImmutableMatrix([[1, x / 2], [x / 2, 1]])
        assert omega == sp.ImmutableMatrix([[0, x / 2], [-x / 2, 0]])

    def test_inverse_of_full_metric(self, plane_chart, plane_symbols):
        x, _ = plane_symbols
        g = sp.Matrix([[2, x], [x, 1]])
        inverse = inverse_metric(g, plane_chart)
        assert sp.simplify(g * inverse - sp.eye(2)) == sp.zeros(2, 2)

    def test_degenerate_metric(self):
        model = load_model("builtin:degenerate")
        with pytest.raises(DegenerateMetricError):
            model.tensor_field()

    def test_metric_pairing(self, sphere_field):
        theta = sphere_field.chart.symbols[0]
        assert metric_pairing(sphere_field, [1, 0], [0, 1]) == 0
        assert metric_pairing(sphere_field, [0, 1], [0, 1]) == sp.sin(theta) ** 2

    def test_metric_form_is_kappa_invariant(self, sphere_field):
        form = metric_form(sphere_field)
        theta = sphere_field.chart.symbols[0]
        assert kappa(form) == form
        assert form.coefficient([Generator((1,), 1), Generator((2,), 1)]) == sp.sin(theta) ** 2


class TestChristoffel:
    def test_sphere_symbols(self, sphere_connection):
        theta = sphere_connection.chart.symbols[0]
        gamma = sphere_connection.gamma
        assert sp.simplify(gamma[0, 1, 1] + sp.sin(theta) * sp.cos(theta)) == 0
        assert sp.simplify(gamma[1, 0, 1] - sp.cos(theta) / sp.sin(theta)) == 0
        assert sp.simplify(gamma[1, 1, 0] - sp.cos(theta) / sp.sin(theta)) == 0
        assert gamma[0, 0, 0] == 0

    def test_euclidean_symbols_vanish(self, euclidean_connection):
        assert all(entry == 0 for entry in table_entries(euclidean_connection.gamma))

    def test_form_coefficients_match_coordinate_formula(self, sphere_field):
        table = christoffel_form_components(christoffel_form(sphere_field))
        assert tables_agree(table, christoffel_first(sphere_field), sphere_field.chart)

    @pytest.mark.parametrize("name", ["sphere2", "flat3-omega", "euclidean3"])
    def test_operator_path_matches_coordinate_path(self, name):
        field_ = load_model(f"builtin:{name}").tensor_field()
        operator = levi_civita_form_operator(field_)
        assert operator.provenance == "operator"
        assert tables_agree(operator.gamma, levi_civita_symbols(field_).gamma, field_.chart)

    def test_flat_omega_symbols(self, flat_omega_connection):
        gamma = flat_omega_connection.gamma
        assert gamma[0, 1, 2] == sp.Rational(1, 2)
        assert gamma[0, 2, 1] == -sp.Rational(1, 2)


class TestTorsion:
    def test_constant_torsion(self, flat_omega_connection, flat_omega_field):
        table = torsion(flat_omega_connection, flat_omega_field)
        assert table[0, 1, 2] == 1
        assert table[1, 2, 0] == 1
        assert table[2, 0, 1] == 1
        assert table[0, 2, 1] == -1
        assert table[0, 0, 1] == 0

    def test_form_and_coordinate_torsion_agree(self, flat_omega_connection):
        assert tables_agree(
            torsion_form(flat_omega_connection), flat_omega_connection.torsion, flat_omega_connection.chart
        )

    def test_torsion_free_for_symmetric_tau(self, sphere_connection, sphere_field):
        assert all(entry == 0 for entry in table_entries(torsion(sphere_connection, sphere_field)))

    def test_two_dimensional_omega_has_no_torsion(self):
        field_ = load_model("builtin:plane-omega").tensor_field()
        assert field_.has_torsion
        c = levi_civita_symbols(field_)
        assert any(entry != 0 for entry in table_entries(c.gamma))
        assert tables_agree(torsion(c, field_), sp.Array([0] * 8, (2, 2, 2)), field_.chart)

    def test_mismatched_field(self, flat_omega_connection):
        euclidean = load_model("builtin:euclidean3")
        field_ = make_tensor_field(flat_omega_connection.chart, euclidean.tau)
        with pytest.raises(TorsionMismatchError):
            torsion(flat_omega_connection, field_)

    def test_lowered_torsion_is_totally_antisymmetric(self, flat_omega_connection, flat_omega_field):
        lowered = lowered_torsion(flat_omega_connection, flat_omega_field)
        assert lowered[0, 1, 2] == 1
        assert lowered[1, 0, 2] == -1
        assert lowered[2, 1, 0] == -1
        assert lowered[1, 1, 2] == 0

    def test_antisymmetrize_weight(self, plane_chart, plane_symbols):
        x, y = plane_symbols
        table = antisymmetrize(2, lambda i: [x, y][i[0]] * [1, 2][i[1]], 2)
        assert sp.expand(table[0, 1] - (2 * x - y) / 2) == 0
        assert sp.expand(table[0, 1] + table[1, 0]) == 0


class TestCurvature:
    def test_sphere_ricci_is_minus_metric(self, sphere_curvature, sphere_field):
        assert sp.simplify(sphere_curvature.ricci + sphere_field.g) == sp.zeros(2, 2)
        assert ricci(sphere_curvature) == sphere_curvature.ricci

    def test_measured_sphere_ricci_sign(self):
        service = SelfTestService()
        assert service.sphere_ricci_sign() == -1
        assert service.conventions()["measured"]["sphere_ricci_sign"] == -1

    def test_riemann_antisymmetry(self, sphere_curvature):
        table = sphere_curvature.riemann
        for delta in range(2):
            for alpha in range(2):
                assert sp.simplify(table[0, 1, delta, alpha] + table[1, 0, delta, alpha]) == 0

    def test_schwarzschild_is_vacuum(self, schwarzschild_curvature, schwarzschild_field):
        assert tables_agree(schwarzschild_curvature.ricci, sp.zeros(4, 4), schwarzschild_field.chart)

    def test_commutator_oracle(self, sphere_connection, sphere_curvature):
        verdict = curvature_commutator_oracle(sphere_connection, sphere_curvature)
        assert verdict.passed
        assert verdict.worst_deviation < 1e-6

    def test_commutator_oracle_with_torsion(self, flat_omega_connection):
        assert curvature_commutator_oracle(flat_omega_connection).passed

    def test_oracle_rejects_wrong_curvature(self, sphere_connection, sphere_curvature):
        from app.shared.calculus.connection import Curvature

        wrong = Curvature(sphere_connection.chart, -sphere_curvature.riemann, sphere_curvature.ricci)
        assert not curvature_commutator_oracle(sphere_connection, wrong).passed


class TestCovariantDerivatives:
    def test_metric_is_parallel(self, sphere_connection, sphere_field):
        g = sp.Array(sphere_field.g.tolist())
        table = covariant_derivative(sphere_connection, g)
        assert tables_agree(table, sp.Array([0] * 8, (2, 2, 2)), sphere_field.chart)

    def test_second_tower_on_metric(self, sphere_connection, sphere_field):
        g = sp.Array(sphere_field.g.tolist())
        table = nabla_tower(2, sphere_connection, g)
        assert tables_agree(table, sp.Array([0] * 8, (2, 2, 2)), sphere_field.chart)

    def test_tower_on_one_form_with_torsion(self, flat_omega_connection):
        x1, x2, x3 = flat_omega_connection.chart.symbols
        s = sp.Array([x1 * x2, sp.sin(x3), x1**2])
        table = nabla_tower(1, flat_omega_connection, s)
        assert tables_agree(table, covariant_derivative(flat_omega_connection, s), flat_omega_connection.chart)

    def test_tower_depth_cap(self, sphere_connection):
        with pytest.raises(InputError):
            nabla_tower(3, sphere_connection, sp.Array([1, 0]))
        with pytest.raises(InputError):
            nabla_tower(2, sphere_connection, sp.Array([[1, 0], [0, 1]]), depth_cap=2)

    def test_scalar_covariant_derivative(self, sphere_connection):
        theta, phi = sphere_connection.chart.symbols
        assert list(covariant_derivative(sphere_connection, theta * phi)) == [phi, theta]

    def test_closing_identity(self, flat_omega_field):
        lhs, rhs = closing_identity_tables(flat_omega_field)
        assert tables_agree(lhs, rhs, flat_omega_field.chart)

    @pytest.mark.slow
    def test_closing_identity_curved(self):
        field_ = load_model("builtin:schwarzschild-omega").tensor_field()
        lhs, rhs = closing_identity_tables(field_)
        assert tables_agree(lhs, rhs, field_.chart)


def test_dual_path_with_nonconstant_omega():
    chart = make_chart(["u", "v"], [(0.5, 1.5), (0.5, 1.5)])
    u, v = chart.symbols
    field_ = make_tensor_field(chart, sp.Matrix([[u, v / 3], [-v / 3, u * v]]))
    c = levi_civita_symbols(field_)
    assert isinstance(c, Connection)
    assert tables_agree(levi_civita_form_operator(field_).gamma, c.gamma, chart)
