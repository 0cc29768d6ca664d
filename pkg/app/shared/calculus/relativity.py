"""Невязки естественных уравнений Ric(τ)=0 и их расщепления на уравнения для g и ω."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from app.settings import config

from .connection import (
    TensorField2,
    antisymmetrized_omega_derivative,
    covariant_derivative,
    levi_civita_symbols,
    riemann,
    table_entries,
)
from .scalar_expr import compile_table, sample_points

logger = logging.getLogger(__name__)

REFERENCE_QUADRATIC_CONSTANT = 9 / 16


@dataclass(slots=True, frozen=True)
class EquationResidual:
    """Максимум |невязки| одного семейства уравнений по точкам выборки."""

    name: str
    max_residual: float
    worst_point: tuple[float, ...] | None
    worst_component: str | None
    components: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class ResidualReport:
    equations: tuple[EquationResidual, ...]
    points: int
    tolerance: float

    @property
    def max_residual(self) -> float:
        return max((eq.max_residual for eq in self.equations), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "points": self.points,
            "tolerance": self.tolerance,
            "equations": [
                {
                    "name": eq.name,
                    "max_residual": eq.max_residual,
                    "worst_point": eq.worst_point,
                    "worst_component": eq.worst_component,
                    "components": eq.components,
                }
                for eq in self.equations
            ],
        }


@dataclass(slots=True, frozen=True)
class FitResult:
    """Константа c в A ≈ c·F, подобранная отдельно в каждой точке."""

    name: str
    constant: float | None
    std: float | None
    residual: float
    reference: float | None = None

    @property
    def determined(self) -> bool:
        return self.constant is not None

    @property
    def deviates(self) -> bool:
        if self.reference is None or self.constant is None:
            return False
        return abs(self.constant - self.reference) > 1e-6

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "constant": self.constant,
            "std": self.std,
            "residual": self.residual,
            "reference": self.reference,
            "deviates_from_reference": self.deviates,
        }


@dataclass(frozen=True)
class DecompositionReport:
    antisymmetric: FitResult
    symmetric: FitResult
    points: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(
            fit.residual <= self.tolerance and (fit.std is None or fit.std < 1e-6)
            for fit in (self.antisymmetric, self.symmetric)
        )

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "points": self.points,
            "tolerance": self.tolerance,
            "antisymmetric": self.antisymmetric.as_dict(),
            "symmetric": self.symmetric.as_dict(),
        }


# Численные таблицы в точках


class _PointTables:
    """Компилированные таблицы Ricci(τ), Ricci(g), g^{-1}, ∂[ω] и ∇̄∂[ω]."""

    def __init__(self, field_: TensorField2):
        n = field_.dimension
        self.n = n
        self.chart = field_.chart
        self.ricci_tau = riemann(levi_civita_symbols(field_)).ricci
        metric_connection = levi_civita_symbols(field_.metric_only())
        self.ricci_g = riemann(metric_connection).ricci
        h = antisymmetrized_omega_derivative(field_)
        dh = covariant_derivative(metric_connection, h)
        self._ricci_tau = compile_table(list(self.ricci_tau), self.chart)
        self._ricci_g = compile_table(list(self.ricci_g), self.chart)
        self._g_inv = compile_table(list(field_.g_inv), self.chart)
        self._h = compile_table(table_entries(h), self.chart)
        self._dh = compile_table(table_entries(dh), self.chart)
        self.exprs = list(self.ricci_tau) + table_entries(dh)

    def ricci_tau_at(self, point) -> np.ndarray:
        return self._ricci_tau(point).reshape(self.n, self.n)

    def ricci_g_at(self, point) -> np.ndarray:
        return self._ricci_g(point).reshape(self.n, self.n)

    def quadratic_at(self, point) -> np.ndarray:
        """Q_{μν} = g^{γρ} g^{δσ} ∂[ω]_{δμρ} ∂[ω]_{γνσ}."""
        n = self.n
        g_inv = self._g_inv(point).reshape(n, n)
        h = self._h(point).reshape(n, n, n)
        return np.einsum("gr,ds,dmr,gns->mn", g_inv, g_inv, h, h)

    def divergence_at(self, point) -> np.ndarray:
        """F_{μν} = g^{γλ} ∇̄_λ ∂[ω]_{μνγ}."""
        n = self.n
        g_inv = self._g_inv(point).reshape(n, n)
        dh = self._dh(point).reshape(n, n, n, n)
        return np.einsum("gl,mngl->mn", g_inv, dh)


def _points(field_: TensorField2, points, exprs, count: int | None = None) -> List[np.ndarray]:
    if points is not None:
        return [np.asarray(p, dtype=float) for p in points]
    return sample_points(field_.chart, count or config.SAMPLE_POINTS, exprs)


def _component_label(field_: TensorField2, index: tuple[int, ...]) -> str:
    return " ".join(field_.chart.names[i] for i in index)


def _residual(
    name: str, field_: TensorField2, points: Sequence[np.ndarray], values: Sequence[np.ndarray]
) -> EquationResidual:
    worst, worst_point, worst_component = 0.0, None, None
    components: Dict[str, float] = {}
    for point, table in zip(points, values):
        magnitude = np.abs(table)
        for index in np.ndindex(magnitude.shape):
            label = _component_label(field_, index)
            components[label] = max(components.get(label, 0.0), float(magnitude[index]))
        position = np.unravel_index(int(np.argmax(magnitude)), magnitude.shape)
        if magnitude[position] > worst or worst_point is None:
            worst = float(magnitude[position])
            worst_point = tuple(float(v) for v in point)
            worst_component = _component_label(field_, tuple(int(i) for i in position))
    return EquationResidual(name, worst, worst_point, worst_component, components)


def natural_residual(
    field_: TensorField2, points=None, tolerance: float | None = None, count: int | None = None
) -> ResidualReport:
    """Невязка Ric(τ) = 0 по всем компонентам."""
    tolerance = config.RESIDUAL_TOLERANCE if tolerance is None else tolerance
    n = field_.dimension
    ricci_tau = riemann(levi_civita_symbols(field_)).ricci
    table = compile_table(list(ricci_tau), field_.chart)
    points = _points(field_, points, list(ricci_tau), count)
    values = [table(p).reshape(n, n) for p in points]
    report = ResidualReport((_residual("ricci", field_, points, values),), len(points), tolerance)
    logger.info("Ric(τ): максимальная невязка %.3e по %d точкам", report.max_residual, len(points))
    return report


def einstein_split_residual(
    field_: TensorField2, points=None, tolerance: float | None = None, count: int | None = None
) -> ResidualReport:
    """Невязки R̄ + 9/16 Q = 0 и ∇̄^γ ∂[ω]_{μνγ} = 0."""
    tolerance = config.RESIDUAL_TOLERANCE if tolerance is None else tolerance
    tables = _PointTables(field_)
    points = _points(field_, points, tables.exprs, count)
    einstein = [tables.ricci_g_at(p) + REFERENCE_QUADRATIC_CONSTANT * tables.quadratic_at(p) for p in points]
    divergence = [tables.divergence_at(p) for p in points]
    report = ResidualReport(
        (
            _residual("einstein", field_, points, einstein),
            _residual("divergence", field_, points, divergence),
        ),
        len(points),
        tolerance,
    )
    logger.info("Расщеплённая система: максимальная невязка %.3e", report.max_residual)
    return report


def _fit(name: str, targets, features, reference: float | None) -> FitResult:
    constants = []
    for target, feature in zip(targets, features):
        norm = float(np.sum(feature * feature))
        if norm > 1e-20:
            constants.append(float(np.sum(target * feature)) / norm)
    if not constants:
        residual = max((float(np.max(np.abs(t))) for t in targets), default=0.0)
        return FitResult(name, None, None, residual, reference)
    constant = float(np.mean(constants))
    std = float(np.std(constants))
    residual = max(float(np.max(np.abs(t - constant * f))) for t, f in zip(targets, features))
    return FitResult(name, constant, std, residual, reference)


def decomposition_check(
    field_: TensorField2, points=None, tolerance: float | None = None, count: int | None = None
) -> DecompositionReport:
    """Подгонка констант: asym Ric(τ) ≈ a·F и sym Ric(τ) − R̄ ≈ b·Q."""
    tolerance = config.RESIDUAL_TOLERANCE if tolerance is None else tolerance
    tables = _PointTables(field_)
    points = _points(field_, points, tables.exprs, count)
    antisymmetric, symmetric, divergence, quadratic = [], [], [], []
    for point in points:
        ricci_tau = tables.ricci_tau_at(point)
        antisymmetric.append(0.5 * (ricci_tau - ricci_tau.T))
        symmetric.append(0.5 * (ricci_tau + ricci_tau.T) - tables.ricci_g_at(point))
        divergence.append(tables.divergence_at(point))
        quadratic.append(tables.quadratic_at(point))
    report = DecompositionReport(
        _fit("antisymmetric", antisymmetric, divergence, None),
        _fit("symmetric", symmetric, quadratic, REFERENCE_QUADRATIC_CONSTANT),
        len(points),
        tolerance,
    )
    if report.symmetric.deviates:
        logger.warning(
            "Квадратичная константа %.6g отличается от 9/16", report.symmetric.constant
        )
    return report
