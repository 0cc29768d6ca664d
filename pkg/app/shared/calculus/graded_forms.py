"""Алгебра итерированных дифференциальных форм над картой.

Знак Кошуля покомпонентный: (-1)^(p*p' + sum a_i*b_i). Генератор d_S x^mu имеет
чётность координаты x^mu и степень, равную индикатору множества слотов S.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import sympy as sp

from app.settings import config
from app.shared.errors import CalculusError, DepthOverflowError, DimensionError, InputError

from .charts import Chart
from .scalar_expr import ScalarExpr, to_text

logger = logging.getLogger(__name__)


@dataclass(slots=True, frozen=True)
class MultiDegree:
    parity: int
    degrees: tuple[int, ...]

    def __add__(self, other: "MultiDegree") -> "MultiDegree":
        if len(self.degrees) != len(other.degrees):
            raise DimensionError("Мультистепени разной глубины")
        return MultiDegree(
            (self.parity + other.parity) % 2,
            tuple(a + b for a, b in zip(self.degrees, other.degrees)),
        )

    @classmethod
    def zero(cls, depth: int) -> "MultiDegree":
        return cls(0, (0,) * depth)

    @classmethod
    def of_slots(cls, slots: Iterable[int], depth: int, parity: int = 0, sign: int = 1) -> "MultiDegree":
        slot_set = set(slots)
        return cls(parity % 2, tuple(sign if i + 1 in slot_set else 0 for i in range(depth)))


def koszul_sign(a: MultiDegree, b: MultiDegree) -> int:
    """Знак перестановки элементов степеней a и b."""
    if len(a.degrees) != len(b.degrees):
        raise DimensionError("Мультистепени разной глубины")
    exponent = a.parity * b.parity + sum(x * y for x, y in zip(a.degrees, b.degrees))
    return -1 if exponent % 2 else 1


@dataclass(slots=True, frozen=True)
class Generator:
    """Генератор d_S x^mu: слоты S (по возрастанию) и номер координаты."""

    slots: tuple[int, ...]
    coord: int

    @property
    def sort_key(self) -> tuple:
        return (len(self.slots), self.slots, self.coord)

    def label(self, chart: Chart) -> str:
        prefix = "".join(f"d{slot}" for slot in reversed(self.slots))
        return f"{prefix}x^{chart.names[self.coord]}"


Monomial = Tuple[Generator, ...]


@dataclass(slots=True, frozen=True)
class FormAlgebra:
    """Алгебра Λ_k итерированных форм глубины depth над картой."""

    chart: Chart
    depth: int = field(default_factory=lambda: config.DEPTH_CAP)

    def __post_init__(self):
        if self.depth < 1:
            raise InputError("Глубина итерации должна быть не меньше 1")

    def degree_of(self, generator: Generator) -> MultiDegree:
        return _generator_degree(generator.slots, self.depth, self.chart.parities[generator.coord])

    def monomial_degree(self, monomial: Monomial) -> MultiDegree:
        total = MultiDegree.zero(self.depth)
        for generator in monomial:
            total = total + self.degree_of(generator)
        return total

    def check_slot(self, slot: int) -> None:
        if not 1 <= slot <= self.depth:
            raise DepthOverflowError(slot, self.depth)

    def normal_order(self, word: Sequence[Generator]) -> tuple[int, Monomial | None]:
        """Сортирует слово генераторов; возвращает знак и моном (None, если моном нулевой)."""
        return _normal_order(tuple(word), self.depth, self.chart.parities)

    # Конструкторы форм

    def form(self, terms: Mapping[Monomial, ScalarExpr] | None = None) -> "IteratedForm":
        return IteratedForm(self, _pruned(terms or {}))

    def zero(self) -> "IteratedForm":
        return self.form()

    def scalar(self, value) -> "IteratedForm":
        return self.form({(): sp.sympify(value)})

    def generator(self, slots: Iterable[int], coord: int) -> "IteratedForm":
        ordered = tuple(sorted(set(slots)))
        if not ordered:
            raise InputError("Множество слотов генератора не может быть пустым")
        for slot in ordered:
            self.check_slot(slot)
        return self.form({(Generator(ordered, coord),): sp.Integer(1)})

    def word(self, generators: Sequence[Generator], coefficient=1) -> "IteratedForm":
        sign, monomial = self.normal_order(generators)
        if monomial is None:
            return self.zero()
        return self.form({monomial: sign * sp.sympify(coefficient)})


@lru_cache(maxsize=4096)
def _generator_degree(slots: tuple[int, ...], depth: int, parity: int) -> MultiDegree:
    return MultiDegree.of_slots(slots, depth, parity)


@lru_cache(maxsize=1 << 16)
def _normal_order(
    word: Monomial, depth: int, parities: tuple[int, ...]
) -> tuple[int, Monomial | None]:
    for generator in word:
        for slot in generator.slots:
            if not 1 <= slot <= depth:
                raise DepthOverflowError(slot, depth)
    items = list(word)
    degrees = [_generator_degree(g.slots, depth, parities[g.coord]) for g in items]
    sign = 1
    # сортировка вставками, знак Кошуля за каждую транспозицию соседей
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1].sort_key > items[j].sort_key:
            sign *= koszul_sign(degrees[j - 1], degrees[j])
            items[j - 1], items[j] = items[j], items[j - 1]
            degrees[j - 1], degrees[j] = degrees[j], degrees[j - 1]
            j -= 1
    for position in range(len(items) - 1):
        if items[position] == items[position + 1]:
            degree = degrees[position]
            if koszul_sign(degree, degree) == -1:
                return 0, None
    return sign, tuple(items)


def _pruned(terms: Mapping[Monomial, ScalarExpr]) -> Dict[Monomial, ScalarExpr]:
    return {monomial: coeff for monomial, coeff in terms.items() if coeff != 0}


def _accumulate(target: Dict[Monomial, ScalarExpr], monomial: Monomial, coeff: ScalarExpr) -> None:
    target[monomial] = target.get(monomial, sp.Integer(0)) + coeff


@dataclass(frozen=True, eq=False)
class IteratedForm:
    """Линейная комбинация мономов в нормальной форме."""

    algebra: FormAlgebra
    terms: Dict[Monomial, ScalarExpr]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IteratedForm):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "IteratedForm") -> "IteratedForm":
        result = dict(self.terms)
        for monomial, coeff in other.terms.items():
            _accumulate(result, monomial, coeff)
        return self.algebra.form(result)

    def __neg__(self) -> "IteratedForm":
        return self.scale(-1)

    def __sub__(self, other: "IteratedForm") -> "IteratedForm":
        return self + (-other)

    def __mul__(self, other) -> "IteratedForm":
        if isinstance(other, IteratedForm):
            return product(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "IteratedForm":
        return self.scale(other)

    def scale(self, factor) -> "IteratedForm":
        factor = sp.sympify(factor)
        return self.algebra.form({m: factor * c for m, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, generators: Sequence[Generator]) -> ScalarExpr:
        """Коэффициент при слове генераторов (с учётом знака упорядочивания)."""
        sign, monomial = self.algebra.normal_order(generators)
        if monomial is None:
            return sp.Integer(0)
        return sign * self.terms.get(monomial, sp.Integer(0))

    def degree(self) -> MultiDegree:
        degrees = {self.algebra.monomial_degree(monomial) for monomial in self.terms}
        if len(degrees) > 1:
            raise CalculusError("Степень неоднородной формы не определена")
        return degrees.pop() if degrees else MultiDegree.zero(self.algebra.depth)

    def max_slot(self) -> int:
        slots = [slot for monomial in self.terms for g in monomial for slot in g.slots]
        return max(slots, default=0)

    def map_coefficients(self, func) -> "IteratedForm":
        return self.algebra.form({m: func(c) for m, c in self.terms.items()})

    def expand(self) -> "IteratedForm":
        return self.map_coefficients(sp.expand)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chart = self.algebra.chart
        lines = []
        for monomial in sorted(self.terms, key=lambda m: [g.sort_key for g in m]):
            coeff = to_text(self.terms[monomial])
            body = " ".join(g.label(chart) for g in monomial)
            lines.append(f"{coeff} · {body}" if body else coeff)
        return " + ".join(lines)


def _same_algebra(first: IteratedForm, second: IteratedForm) -> FormAlgebra:
    if first.algebra != second.algebra:
        raise InputError("Формы принадлежат разным алгебрам")
    return first.algebra


def product(f: IteratedForm, g: IteratedForm) -> IteratedForm:
    """Произведение форм с приведением к нормальной форме."""
    algebra = _same_algebra(f, g)
    result: Dict[Monomial, ScalarExpr] = {}
    for left, left_coeff in f.terms.items():
        for right, right_coeff in g.terms.items():
            sign, monomial = algebra.normal_order(left + right)
            if monomial is not None:
                _accumulate(result, monomial, sign * left_coeff * right_coeff)
    return algebra.form(result)


def _passing_sign(algebra: FormAlgebra, operator: MultiDegree, prefix: Sequence[Generator]) -> int:
    sign = 1
    for generator in prefix:
        sign *= koszul_sign(operator, algebra.degree_of(generator))
    return sign


def _accumulate_word(
    algebra: FormAlgebra, target: Dict[Monomial, ScalarExpr], word: Sequence[Generator], coeff
) -> None:
    sign, monomial = algebra.normal_order(word)
    if monomial is not None:
        _accumulate(target, monomial, sign * coeff)


def differential(slot: int, form: IteratedForm) -> IteratedForm:
    """Дифференциал d_slot как дифференцирование степени e_slot."""
    algebra = form.algebra
    algebra.check_slot(slot)
    chart = algebra.chart
    operator = MultiDegree.of_slots((slot,), algebra.depth)
    symbols = [(coord, chart.symbol(coord)) for coord in chart.even_indices]
    result: Dict[Monomial, ScalarExpr] = {}
    for monomial, coeff in form.terms.items():
        free = getattr(coeff, "free_symbols", ())
        for coord, symbol in symbols:
            if symbol in free:
                word = (Generator((slot,), coord),) + monomial
                _accumulate_word(algebra, result, word, sp.diff(coeff, symbol))
        for position, generator in enumerate(monomial):
            if slot in generator.slots:
                continue
            raised = Generator(tuple(sorted(generator.slots + (slot,))), generator.coord)
            sign = _passing_sign(algebra, operator, monomial[:position])
            word = monomial[:position] + (raised,) + monomial[position + 1 :]
            _accumulate_word(algebra, result, word, sign * coeff)
    return algebra.form(result)


def kappa(form: IteratedForm) -> IteratedForm:
    """Инволюция κ: перестановка слотов 1 и 2 во всех генераторах."""
    algebra = form.algebra
    if form.max_slot() > 2:
        raise InputError("κ определена только на формах глубины 2")
    swap = {1: 2, 2: 1}
    result: Dict[Monomial, ScalarExpr] = {}
    for monomial, coeff in form.terms.items():
        word = tuple(Generator(tuple(sorted(swap[s] for s in g.slots)), g.coord) for g in monomial)
        _accumulate_word(algebra, result, word, coeff)
    return algebra.form(result)


def insert_slot(slots: Iterable[int], coord: int, form: IteratedForm) -> IteratedForm:
    """Подстановка, переводящая d_S x^coord в 1 и убивающая прочие генераторы."""
    algebra = form.algebra
    target = tuple(sorted(set(slots)))
    for slot in target:
        algebra.check_slot(slot)
    operator = MultiDegree.of_slots(target, algebra.depth, algebra.chart.parities[coord], sign=-1)
    hit = Generator(target, coord)
    result: Dict[Monomial, ScalarExpr] = {}
    for monomial, coeff in form.terms.items():
        for position, generator in enumerate(monomial):
            if generator != hit:
                continue
            sign = _passing_sign(algebra, operator, monomial[:position])
            _accumulate(result, monomial[:position] + monomial[position + 1 :], sign * coeff)
    return algebra.form(result)


def insert_field(slot: int, field_components: Sequence[ScalarExpr], form: IteratedForm) -> IteratedForm:
    """Подстановка i^(slot)_X векторного поля X = X^mu ∂_mu."""
    algebra = form.algebra
    if len(field_components) != algebra.chart.dimension:
        raise DimensionError("Число компонент поля не совпадает с размерностью карты")
    result = algebra.zero()
    for coord, component in enumerate(field_components):
        component = sp.sympify(component)
        if component != 0:
            result = result + insert_slot((slot,), coord, form).scale(component)
    return result


def insert_insertion(coord: int, form: IteratedForm) -> IteratedForm:
    """Подстановка i^(2)_{i_∂coord} бистепени (-1,-1)."""
    return insert_slot((1, 2), coord, form)


def lie(field_components: Sequence[ScalarExpr], form: IteratedForm, slot: int = 1) -> IteratedForm:
    """Производная Ли L_X = [i_X, d] в слоте slot."""
    algebra = form.algebra
    insertion = MultiDegree.of_slots((slot,), algebra.depth, sign=-1)
    exterior = MultiDegree.of_slots((slot,), algebra.depth)
    sign = koszul_sign(insertion, exterior)
    first = insert_field(slot, field_components, differential(slot, form))
    second = differential(slot, insert_field(slot, field_components, form))
    return first - second.scale(sign)


# Дифференцирования с коэффициентами-формами


@dataclass(slots=True, frozen=True)
class CoordinatePartial:
    """Базисный оператор ∂_mu: действует на коэффициенты, генераторы постоянны."""

    coord: int

    def degree(self, algebra: FormAlgebra) -> MultiDegree:
        return MultiDegree.zero(algebra.depth)

    def apply(self, form: IteratedForm) -> IteratedForm:
        symbol = form.algebra.chart.symbol(self.coord)
        return form.map_coefficients(lambda coeff: sp.diff(coeff, symbol))


@dataclass(slots=True, frozen=True)
class SlotInsertion:
    """Базисный оператор подстановки: i^(j)_∂mu при S={j}, i^(2)_{i_∂mu} при S={1,2}."""

    slots: tuple[int, ...]
    coord: int

    def degree(self, algebra: FormAlgebra) -> MultiDegree:
        parity = algebra.chart.parities[self.coord]
        return MultiDegree.of_slots(self.slots, algebra.depth, parity, sign=-1)

    def apply(self, form: IteratedForm) -> IteratedForm:
        return insert_slot(self.slots, self.coord, form)


BasisOperator = CoordinatePartial | SlotInsertion


@dataclass(frozen=True)
class FormDerivation:
    """Сумма слагаемых coefficient · operator."""

    algebra: FormAlgebra
    terms: tuple[tuple[IteratedForm, BasisOperator], ...] = ()

    def __add__(self, other: "FormDerivation") -> "FormDerivation":
        return FormDerivation(self.algebra, self.terms + other.terms)

    def with_term(self, coefficient: IteratedForm, operator: BasisOperator) -> "FormDerivation":
        if coefficient.is_zero():
            return self
        return FormDerivation(self.algebra, self.terms + ((coefficient, operator),))


def apply_derivation(derivation: FormDerivation, form: IteratedForm) -> IteratedForm:
    """Применяет дифференцирование: коэффициент умножается слева на результат оператора."""
    result = form.algebra.zero()
    for coefficient, operator in derivation.terms:
        image = operator.apply(form)
        if not image.is_zero():
            result = result + product(coefficient, image)
    return result


# Вложение тензоров и извлечение компонент


def embed_tensor(algebra: FormAlgebra, components) -> IteratedForm:
    """ι_k(s) = s_{b1..bk} d1x^b1 ... dkx^bk."""
    if isinstance(components, (sp.Expr, int)):
        return algebra.scalar(components)
    components = sp.Array(components)
    rank = components.rank()
    for slot in range(1, rank + 1):
        algebra.check_slot(slot)
    terms: Dict[Monomial, ScalarExpr] = {}
    for index in _indices(algebra.chart.dimension, rank):
        coeff = components[index]
        if coeff != 0:
            word = tuple(Generator((slot + 1,), coord) for slot, coord in enumerate(index))
            sign, monomial = algebra.normal_order(word)
            if monomial is not None:
                _accumulate(terms, monomial, sign * coeff)
    return algebra.form(terms)


def extract_components(form: IteratedForm, rank: int):
    """Таблица (i^(1)_∂b1 ∘ ... ∘ i^(rank)_∂brank)(F); подстановки старших слотов первыми."""
    n = form.algebra.chart.dimension
    if rank == 0:
        return form.terms.get((), sp.Integer(0))
    flat = []
    for index in _indices(n, rank):
        current = form
        for slot in range(rank, 0, -1):
            current = insert_slot((slot,), index[slot - 1], current)
            if current.is_zero():
                break
        flat.append(current.terms.get((), sp.Integer(0)))
    return sp.Array(flat, (n,) * rank)


def _indices(n: int, rank: int) -> Iterable[tuple[int, ...]]:
    if rank == 0:
        yield ()
        return
    for head in range(n):
        for tail in _indices(n, rank - 1):
            yield (head,) + tail
