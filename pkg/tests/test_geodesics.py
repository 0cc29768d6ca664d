import math

import numpy as np
import pytest

from app.shared.calculus.connection import levi_civita_symbols
from app.shared.calculus.geodesics import (
    GeodesicIntegrator,
    geodesic_curvature,
    initial_state,
    integrate,
    parse_curve,
    speed_along,
    trajectory_curvature,
)
from app.shared.errors import DomainExitError, InputError


class TestIntegrator:
    def test_straight_line_in_flat_space(self, euclidean_connection):
        start = initial_state([0.0, 0.0, 0.0], [0.1, 0.2, 0.3])
        trajectory = integrate(euclidean_connection, start, 1.0, 10)
        assert len(trajectory) == 11
        np.testing.assert_allclose(trajectory[-1].position, [0.1, 0.2, 0.3], atol=1e-12)
        assert trajectory[-1].time == pytest.approx(1.0)

    def test_equator_is_geodesic(self, sphere_connection, sphere_field):
        start = initial_state([math.pi / 2, 0.0], [0.0, 1.0])
        trajectory = integrate(sphere_connection, start, 2 * math.pi, 2000)
        assert max(abs(state.position[0] - math.pi / 2) for state in trajectory) < 1e-9
        assert trajectory[-1].position[1] == pytest.approx(2 * math.pi)
        speeds = speed_along(sphere_connection, sphere_field.g, trajectory)
        assert max(abs(s - speeds[0]) for s in speeds) < 1e-8

    def test_tilted_great_circle_conserves_speed(self, sphere_connection, sphere_field):
        start = initial_state([1.2, 0.3], [0.2, 0.5])
        trajectory = integrate(sphere_connection, start, 1.5, 1500)
        speeds = speed_along(sphere_connection, sphere_field.g, trajectory)
        assert max(abs(s - speeds[0]) for s in speeds) / speeds[0] < 1e-8

    def test_torsion_does_not_bend_geodesics(self, flat_omega_connection, flat_omega_field):
        metric_only = levi_civita_symbols(flat_omega_field.metric_only())
        start = initial_state([0.1, -0.2, 0.3], [0.3, 0.2, -0.25])
        first = integrate(flat_omega_connection, start, 1.0, 50)
        second = integrate(metric_only, start, 1.0, 50)
        for a, b in zip(first, second):
            np.testing.assert_allclose(a.position, b.position, atol=1e-12)

    def test_schwarzschild_radial_infall_keeps_unit_speed(self, schwarzschild_field):
        connection = levi_civita_symbols(schwarzschild_field)
        r0 = 8.0
        start = initial_state([0.0, r0, math.pi / 2, 1.0], [1 / math.sqrt(1 - 1 / r0), 0.0, 0.0, 0.0])
        trajectory = integrate(connection, start, 2.0, 400)
        speeds = speed_along(connection, schwarzschild_field.g, trajectory)
        assert max(abs(s + 1) for s in speeds) < 1e-7
        assert trajectory[-1].position[1] < r0
        assert trajectory[-1].position[2] == pytest.approx(math.pi / 2)

    def test_domain_exit_keeps_last_state(self, euclidean_connection):
        start = initial_state([0.0, 0.0, 0.0], [4.0, 0.0, 0.0])
        with pytest.raises(DomainExitError) as error:
            integrate(euclidean_connection, start, 1.0, 10)
        assert error.value.step == 3
        assert error.value.last_state.position[0] == pytest.approx(0.8)

    def test_start_outside_domain(self, euclidean_connection):
        with pytest.raises(DomainExitError) as error:
            integrate(euclidean_connection, initial_state([2.0, 0.0, 0.0], [0.0, 0.0, 0.0]), 1.0, 10)
        assert error.value.step == 0

    def test_invalid_steps(self, euclidean_connection):
        with pytest.raises(InputError):
            integrate(euclidean_connection, initial_state([0.0] * 3, [0.0] * 3), 1.0, 0)

    def test_wrong_dimension(self, euclidean_connection):
        with pytest.raises(InputError):
            GeodesicIntegrator(euclidean_connection).run(initial_state([0.0], [1.0]), 1.0, 5)

    def test_record(self):
        record = initial_state([1, 2], [3, 4], time=0.5).as_record()
        assert record == {"t": 0.5, "position": [1.0, 2.0], "velocity": [3.0, 4.0]}


class TestGeodesicCurvature:
    def test_meridian_is_geodesic(self, sphere_connection):
        curve = parse_curve(["t", "1/2"])
        np.testing.assert_allclose(geodesic_curvature(sphere_connection, curve, 1.0), [0.0, 0.0], atol=1e-12)

    def test_latitude_circle_is_not_geodesic(self, sphere_connection):
        curve = parse_curve(["1", "t"])
        k = geodesic_curvature(sphere_connection, curve, 0.4)
        assert k[0] == pytest.approx(-math.sin(1.0) * math.cos(1.0))
        assert k[1] == pytest.approx(0.0, abs=1e-12)

    def test_integrated_trajectory_has_small_curvature(self, sphere_connection):
        start = initial_state([1.0, 0.0], [0.3, 0.8])
        trajectory = integrate(sphere_connection, start, 1.0, 1000)
        assert np.max(np.abs(trajectory_curvature(sphere_connection, trajectory))) < 1e-4

    def test_curve_dimension_mismatch(self, sphere_connection):
        with pytest.raises(InputError):
            geodesic_curvature(sphere_connection, parse_curve(["t"]), 0.0)
