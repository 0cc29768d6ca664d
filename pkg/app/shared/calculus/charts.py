"""Координатные карты и области случайной выборки точек."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Sequence

import numpy as np
import sympy as sp

from app.settings import config
from app.shared.errors import InputError

logger = logging.getLogger(__name__)


@dataclass(slots=True, frozen=True)
class SamplingDomain:
    """Отрезки по чётным координатам и параметры случайной проверки."""

    intervals: tuple[tuple[float, float], ...]
    trials: int = field(default_factory=lambda: config.TRIALS)
    tolerance: float = field(default_factory=lambda: config.TOLERANCE)
    seed: int = field(default_factory=lambda: config.SEED)

    def __post_init__(self):
        for low, high in self.intervals:
            if not low <= high:
                raise InputError(f"Пустой отрезок выборки [{low}, {high}]")
        if self.trials < 1:
            raise InputError("Число испытаний должно быть не меньше 1")

    def sampler(self, seed: int | None = None) -> np.random.Generator:
        return np.random.default_rng(self.seed if seed is None else seed)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        lows = np.array([low for low, _ in self.intervals], dtype=float)
        highs = np.array([high for _, high in self.intervals], dtype=float)
        return lows + (highs - lows) * rng.random(len(self.intervals))

    def contains(self, point: Sequence[float]) -> bool:
        return all(low <= value <= high for value, (low, high) in zip(point, self.intervals))

    def with_options(self, **changes) -> "SamplingDomain":
        values = {
            "intervals": self.intervals,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "seed": self.seed,
        }
        values.update({key: value for key, value in changes.items() if value is not None})
        return SamplingDomain(**values)


@dataclass(slots=True, frozen=True)
class Chart:
    """Упорядоченные имена координат карты и область выборки."""

    names: tuple[str, ...]
    domain: SamplingDomain
    parities: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.names:
            raise InputError("Карта должна содержать хотя бы одну координату")
        if len(set(self.names)) != len(self.names):
            raise InputError(f"Имена координат повторяются: {', '.join(self.names)}")
        if not self.parities:
            object.__setattr__(self, "parities", (0,) * len(self.names))
        if len(self.parities) != len(self.names):
            raise InputError("Длина вектора чётностей не совпадает с размерностью карты")
        if any(parity not in (0, 1) for parity in self.parities):
            raise InputError("Чётность координаты должна быть 0 или 1")
        if len(self.domain.intervals) != len(self.even_indices):
            raise InputError("Область выборки задаётся ровно для чётных координат")

    @property
    def dimension(self) -> int:
        return len(self.names)

    @property
    def even_indices(self) -> tuple[int, ...]:
        return tuple(index for index, parity in enumerate(self.parities) if parity == 0)

    @property
    def odd_indices(self) -> tuple[int, ...]:
        return tuple(index for index, parity in enumerate(self.parities) if parity == 1)

    @property
    def is_super(self) -> bool:
        return bool(self.odd_indices)

    @property
    def symbols(self) -> tuple[sp.Symbol, ...]:
        """Символы чётных координат в порядке карты."""
        return tuple(sp.Symbol(self.names[index], real=True) for index in self.even_indices)

    def symbol(self, coord: int) -> sp.Symbol:
        if self.parities[coord]:
            raise InputError(f"Координата {self.names[coord]} нечётная и не имеет значения в точке")
        return sp.Symbol(self.names[coord], real=True)

    def symbol_table(self) -> Dict[str, sp.Symbol]:
        table = {}
        for index, name in enumerate(self.names):
            if self.parities[index]:
                table[name] = sp.Symbol(name, commutative=False)
            else:
                table[name] = sp.Symbol(name, real=True)
        return table

    def index(self, name: str) -> int:
        return self.names.index(name)


@dataclass(slots=True, frozen=True)
class SuperChart(Chart):
    """Карта с нечётными координатами; нечётные направления не сэмплируются."""

    def __post_init__(self):
        Chart.__post_init__(self)
        if self.even_indices and not self.domain.intervals:
            raise InputError("Суперкарта с чётными координатами требует область выборки")


def make_chart(
    names: Sequence[str],
    intervals: Sequence[Sequence[float]],
    parities: Sequence[int] | None = None,
    **options,
) -> Chart:
    """Собирает карту; при наличии нечётных координат возвращает SuperChart."""
    domain = SamplingDomain(tuple((float(low), float(high)) for low, high in intervals))
    domain = domain.with_options(**options)
    parity_tuple = tuple(parities) if parities else ()
    if any(parity_tuple):
        return SuperChart(tuple(names), domain, parity_tuple)
    return Chart(tuple(names), domain, parity_tuple)


def parameter_chart(name: str = "t", interval: tuple[float, float] = (-10.0, 10.0)) -> Chart:
    """Однокоординатная карта параметра кривой."""
    return Chart((name,), SamplingDomain((interval,)))
