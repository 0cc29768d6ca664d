"""Геодезическая кривизна кривых и интегрирование уравнения геодезических методом RK4."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import sympy as sp

from app.shared.errors import DomainExitError, InputError

from .charts import parameter_chart
from .connection import Connection, table_entries
from .scalar_expr import ScalarExpr, compile_table, parse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurveState:
    time: float
    position: np.ndarray
    velocity: np.ndarray

    def as_record(self) -> dict:
        return {
            "t": float(self.time),
            "position": [float(v) for v in self.position],
            "velocity": [float(v) for v in self.velocity],
        }


def parse_curve(texts: Sequence[str], parameter: str = "t") -> List[ScalarExpr]:
    """Компоненты кривой χ(t) как выражения от параметра."""
    chart = parameter_chart(parameter)
    return [parse(text, chart) for text in texts]


class GeodesicIntegrator:
    """Интегратор ẋ = v, v̇^μ = −Γ^μ_{ρα} v^ρ v^α с фиксированным шагом."""

    def __init__(self, connection: Connection):
        self.connection = connection
        self.dimension = connection.dimension
        self._gamma = compile_table(table_entries(connection.gamma), connection.chart)

    def gamma_at(self, position: np.ndarray) -> np.ndarray:
        n = self.dimension
        return self._gamma(position).reshape(n, n, n)

    def acceleration(self, position: np.ndarray, velocity: np.ndarray) -> np.ndarray:
        return -np.einsum("mra,r,a->m", self.gamma_at(position), velocity, velocity)

    def step(self, state: CurveState, h: float) -> CurveState:
        x, v = state.position, state.velocity
        k1x, k1v = v, self.acceleration(x, v)
        k2x, k2v = v + 0.5 * h * k1v, self.acceleration(x + 0.5 * h * k1x, v + 0.5 * h * k1v)
        k3x, k3v = v + 0.5 * h * k2v, self.acceleration(x + 0.5 * h * k2x, v + 0.5 * h * k2v)
        k4x, k4v = v + h * k3v, self.acceleration(x + h * k3x, v + h * k3v)
        position = x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        velocity = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        return CurveState(state.time + h, position, velocity)

    def run(self, start: CurveState, t_end: float, steps: int) -> List[CurveState]:
        if steps < 1:
            raise InputError("Число шагов должно быть положительным")
        if len(start.position) != self.dimension or len(start.velocity) != self.dimension:
            raise InputError("Размерность начального состояния не совпадает с картой")
        domain = self.connection.chart.domain
        if not domain.contains(start.position):
            raise DomainExitError(start, 0)
        h = (t_end - start.time) / steps
        trajectory = [start]
        for index in range(1, steps + 1):
            state = self.step(trajectory[-1], h)
            if not domain.contains(state.position) or not np.all(np.isfinite(state.velocity)):
                logger.warning("Траектория вышла из области на шаге %d", index)
                raise DomainExitError(trajectory[-1], index)
            trajectory.append(state)
        logger.debug("Проинтегрировано %d шагов, h=%.3g", steps, h)
        return trajectory


def initial_state(position: Sequence[float], velocity: Sequence[float], time: float = 0.0) -> CurveState:
    return CurveState(float(time), np.asarray(position, dtype=float), np.asarray(velocity, dtype=float))


def integrate(c: Connection, s0: CurveState, t_end: float, steps: int) -> List[CurveState]:
    return GeodesicIntegrator(c).run(s0, t_end, steps)


def geodesic_curvature(
    c: Connection, curve: Sequence[ScalarExpr], t0: float, parameter: str = "t"
) -> np.ndarray:
    """K^μ = Γ^μ_{ρα} χ̇^ρ χ̇^α + χ̈^μ в момент t0."""
    if len(curve) != c.dimension:
        raise InputError("Число компонент кривой не совпадает с размерностью карты")
    time_chart = parameter_chart(parameter)
    t = time_chart.symbols[0]
    components = [sp.sympify(x) for x in curve]
    table = compile_table(
        components + [sp.diff(x, t) for x in components] + [sp.diff(x, t, 2) for x in components],
        time_chart,
    )
    values = table([t0])
    n = c.dimension
    position, velocity, acceleration = values[:n], values[n : 2 * n], values[2 * n :]
    gamma = GeodesicIntegrator(c).gamma_at(position)
    return np.einsum("mra,r,a->m", gamma, velocity, velocity) + acceleration


def speed_along(c: Connection, g: sp.MatrixBase, trajectory: Sequence[CurveState]) -> List[float]:
    """g_{μν}(x) v^μ v^ν вдоль траектории."""
    n = c.dimension
    table = compile_table(list(g), c.chart)
    speeds = []
    for state in trajectory:
        metric = table(state.position).reshape(n, n)
        speeds.append(float(state.velocity @ metric @ state.velocity))
    return speeds


def trajectory_curvature(c: Connection, trajectory: Sequence[CurveState]) -> np.ndarray:
    """K во внутренних точках траектории: ускорение по центральным разностям скоростей."""
    if len(trajectory) < 3:
        raise InputError("Для разностной оценки нужно не менее трёх состояний")
    integrator = GeodesicIntegrator(c)
    rows = []
    for previous, current, following in zip(trajectory, trajectory[1:], trajectory[2:]):
        h = following.time - previous.time
        acceleration = (following.velocity - previous.velocity) / h
        gamma = integrator.gamma_at(current.position)
        rows.append(np.einsum("mra,r,a->m", gamma, current.velocity, current.velocity) + acceleration)
    return np.array(rows)
