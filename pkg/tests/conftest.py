"""Общие фикстуры: встроенные модели, поля и связности."""

import pytest

from app.shared.calculus.charts import make_chart
from app.shared.calculus.connection import levi_civita_symbols, riemann
from app.shared.model_storage import load_model


def _field(name: str):
    return load_model(f"builtin:{name}").tensor_field()


@pytest.fixture(scope="session")
def sphere_field():
    return _field("sphere2")


@pytest.fixture(scope="session")
def sphere_connection(sphere_field):
    return levi_civita_symbols(sphere_field)


@pytest.fixture(scope="session")
def sphere_curvature(sphere_connection):
    return riemann(sphere_connection)


@pytest.fixture(scope="session")
def schwarzschild_field():
    return _field("schwarzschild")


@pytest.fixture(scope="session")
def schwarzschild_curvature(schwarzschild_field):
    return riemann(levi_civita_symbols(schwarzschild_field))


@pytest.fixture(scope="session")
def flat_omega_field():
    return _field("flat3-omega")


@pytest.fixture(scope="session")
def flat_omega_connection(flat_omega_field):
    return levi_civita_symbols(flat_omega_field)


@pytest.fixture(scope="session")
def euclidean_connection():
    return levi_civita_symbols(_field("euclidean3"))


@pytest.fixture
def plane_chart():
    """Карта (x, y) на квадрате [-1, 1]²."""
    return make_chart(["x", "y"], [(-1, 1), (-1, 1)], seed=5)


@pytest.fixture
def plane_symbols(plane_chart):
    return plane_chart.symbols


@pytest.fixture
def super_chart():
    """Карта 1|2: x чётная, th1 и th2 нечётные."""
    return make_chart(["x", "th1", "th2"], [(-1, 1)], [0, 1, 1], seed=3)
