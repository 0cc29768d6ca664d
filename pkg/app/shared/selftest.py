"""Батарея встроенных проверок: законы алгебры, два пути связности, кручение, кривизна, геодезические."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations
from typing import Any, Callable, Dict, List, Tuple

import numpy as np
import sympy as sp

from app.settings import config
from app.shared.calculus import conventions_data
from app.shared.calculus.charts import make_chart
from app.shared.calculus.connection import (
    Connection,
    Curvature,
    TensorField2,
    christoffel_first,
    christoffel_form,
    christoffel_form_components,
    closing_identity_tables,
    covariant_derivative,
    curvature_commutator_oracle,
    levi_civita_form_operator,
    levi_civita_symbols,
    lowered_torsion,
    nabla_tower,
    riemann,
    table_entries,
    tables_agree,
    torsion,
    torsion_form,
)
from app.shared.calculus.geodesics import initial_state, integrate, speed_along
from app.shared.calculus.graded_forms import (
    FormAlgebra,
    Generator,
    IteratedForm,
    MultiDegree,
    SlotInsertion,
    differential,
    insert_field,
    kappa,
    koszul_sign,
    product,
)
from app.shared.calculus.relativity import decomposition_check, natural_residual
from app.shared.calculus.scalar_expr import eq_randomized_tables
from app.shared.calculus.supergeometry import (
    christoffel_signs,
    make_super_metric,
    super_christoffel,
    super_parity_check,
    super_riemann,
)
from app.shared.errors import CalculusError
from app.shared.model_storage import ModelFile, load_model
from app.shared.models_data import CLASSICAL_MODELS, TORSION_FREE_MODELS, TORSION_MODELS

logger = logging.getLogger(__name__)

# Знаки первых двух слагаемых суперсимволов для чётностей (0, 1, 1), выписанные вручную
HAND_SIGNS_FIRST = [[1, -1, -1], [-1, -1, -1], [-1, -1, -1]]
HAND_SIGNS_SECOND = [
    [[1, -1, -1], [-1, -1, -1], [-1, -1, -1]],
    [[1, -1, -1], [1, 1, 1], [1, 1, 1]],
    [[1, -1, -1], [1, 1, 1], [1, 1, 1]],
]


@dataclass(slots=True)
class CheckResult:
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "details": self.details,
        }


class SelfTestService:
    """Сервис самопроверки с кэшем моделей и связностей."""

    def __init__(self):
        self._models: Dict[str, ModelFile] = {}
        self._fields: Dict[str, TensorField2] = {}
        self._connections: Dict[str, Connection] = {}
        self._curvatures: Dict[str, Curvature] = {}
        self.measured: Dict[str, Any] = {}
        self.checks: Dict[str, Callable[[], Dict[str, Any]]] = {
            "algebra-laws": self.check_algebra_laws,
            "dual-path": self.check_dual_path,
            "torsion": self.check_torsion,
            "curvature-oracle": self.check_curvature_oracle,
            "vacuum": self.check_vacuum,
            "metricity": self.check_metricity,
            "closing-identity": self.check_closing_identity,
            "geodesics": self.check_geodesics,
            "decomposition": self.check_decomposition,
            "super-reduction": self.check_super_reduction,
        }

    # Кэш

    def model(self, name: str) -> ModelFile:
        if name not in self._models:
            self._models[name] = load_model(f"builtin:{name}")
        return self._models[name]

    def field(self, name: str) -> TensorField2:
        if name not in self._fields:
            self._fields[name] = self.model(name).tensor_field()
        return self._fields[name]

    def connection(self, name: str) -> Connection:
        if name not in self._connections:
            self._connections[name] = levi_civita_symbols(self.field(name))
        return self._connections[name]

    def curvature(self, name: str) -> Curvature:
        if name not in self._curvatures:
            self._curvatures[name] = riemann(self.connection(name))
        return self._curvatures[name]

    # Запуск

    def list_checks(self) -> List[str]:
        return list(self.checks)

    def run(self, name_filter: str | None = None) -> List[CheckResult]:
        names = [name for name in self.checks if not name_filter or name_filter in name]
        results = []
        for name in names:
            started = time.perf_counter()
            try:
                details = self.checks[name]()
                passed = bool(details.pop("passed"))
            except CalculusError as error:
                logger.error(f"Проверка {name} завершилась ошибкой: {error}", exc_info=True)
                passed, details = False, {"error": str(error)}
            elapsed = time.perf_counter() - started
            logger.info(f"Проверка {name}: {'пройдена' if passed else 'не пройдена'} за {elapsed:.2f} с")
            results.append(CheckResult(name, passed, details, elapsed))
        return results

    def conventions(self) -> dict:
        if "sphere_ricci_sign" not in self.measured:
            self.measured["sphere_ricci_sign"] = self.sphere_ricci_sign()
        return conventions_data.convention_ledger(self.measured)

    def sphere_ricci_sign(self) -> int:
        """Знак c в Ricci = c·g на единичной сфере."""
        ricci = self.curvature("sphere2").ricci
        metric = self.field("sphere2").g
        return int(sp.sign(sp.simplify(ricci[0, 0] / metric[0, 0])))

    # 1. Законы алгебры

    def check_algebra_laws(self, instances: int | None = None, seed: int | None = None) -> Dict[str, Any]:
        instances = config.ALGEBRA_TRIALS if instances is None else instances
        rng = np.random.default_rng(config.SEED if seed is None else seed)
        chart = make_chart(["x", "y", "th"], [(-1, 1), (-1, 1)], [0, 0, 1])
        algebras = {depth: FormAlgebra(chart, depth) for depth in (2, 3)}
        laws = [(name, algebras[2], law) for name, law in ALGEBRA_LAWS.items()]
        laws += [(name, algebras[3], law) for name, law in DEPTH3_LAWS.items()]
        failures: Dict[str, int] = {}
        for index in range(instances):
            law_name, algebra, law = laws[index % len(laws)]
            forms = [random_monomial(algebra, rng) for _ in range(3)]
            if not law(algebra, *forms):
                failures[law_name] = failures.get(law_name, 0) + 1
        if failures:
            logger.warning("Нарушены законы алгебры: %s", failures)
        return {"passed": not failures, "instances": instances, "laws": len(laws), "failures": failures}

    # 2. Два пути связности

    def check_dual_path(self) -> Dict[str, Any]:
        mismatches = []
        for name in CLASSICAL_MODELS:
            field_ = self.field(name)
            coordinate = self.connection(name)
            operator = levi_civita_form_operator(field_)
            if not tables_agree(coordinate.gamma, operator.gamma, field_.chart):
                mismatches.append(f"{name}: Γ")
            form_table = christoffel_form_components(christoffel_form(field_))
            if not tables_agree(form_table, christoffel_first(field_), field_.chart):
                mismatches.append(f"{name}: γ")
        return {"passed": not mismatches, "models": CLASSICAL_MODELS, "mismatches": mismatches}

    # 3. Кручение

    def check_torsion(self) -> Dict[str, Any]:
        problems = []
        for name in CLASSICAL_MODELS:
            field_ = self.field(name)
            c = self.connection(name)
            table = torsion(c, field_)
            if not tables_agree(torsion_form(c), table, field_.chart):
                problems.append(f"{name}: Γ − κ(Γ)")
            lowered = lowered_torsion(c, field_)
            n = field_.dimension
            swapped = [lowered[m, a, b] for a in range(n) for m in range(n) for b in range(n)]
            rotated = [lowered[a, b, m] for a in range(n) for m in range(n) for b in range(n)]
            negated = [-entry for entry in table_entries(lowered)]
            if not eq_randomized_tables(swapped, negated, field_.chart):
                problems.append(f"{name}: антисимметрия (1 2)")
            if not eq_randomized_tables(rotated, negated, field_.chart):
                problems.append(f"{name}: антисимметрия (2 3)")
            if n == 2 and not eq_randomized_tables(table_entries(table), [0] * n**3, field_.chart):
                problems.append(f"{name}: T ≠ 0 в размерности 2")
        return {"passed": not problems, "problems": problems}

    # 4. Кривизна против конечных разностей

    def check_curvature_oracle(self) -> Dict[str, Any]:
        verdicts = {}
        for name in CLASSICAL_MODELS:
            verdict = curvature_commutator_oracle(self.connection(name), self.curvature(name))
            verdicts[name] = {"passed": verdict.passed, "worst_deviation": verdict.worst_deviation}
        return {"passed": all(v["passed"] for v in verdicts.values()), "models": verdicts}

    # 5. Вакуумное решение

    def check_vacuum(self) -> Dict[str, Any]:
        report = natural_residual(self.field("schwarzschild"))
        return {"passed": report.passed, "max_residual": report.max_residual, "points": report.points}

    # 6. Метричность

    def check_metricity(self) -> Dict[str, Any]:
        failing = []
        for name in TORSION_FREE_MODELS:
            field_ = self.field(name)
            c = self.connection(name)
            g = sp.Array(field_.g.tolist())
            zeros = [0] * field_.dimension**3
            if not eq_randomized_tables(table_entries(covariant_derivative(c, g)), zeros, field_.chart):
                failing.append(f"{name}: ∇g")
            tower = nabla_tower(2, c, g, self.model(name).depth)
            if not eq_randomized_tables(table_entries(tower), zeros, field_.chart):
                failing.append(f"{name}: ∇²g")
        return {"passed": not failing, "failing": failing}

    # 7. ∇²τ = ∇_g²ω + T(ω)

    def check_closing_identity(self) -> Dict[str, Any]:
        failing = []
        for name in TORSION_MODELS:
            field_ = self.field(name)
            lhs, rhs = closing_identity_tables(field_, self.model(name).depth)
            if not tables_agree(lhs, rhs, field_.chart):
                failing.append(name)
        return {"passed": not failing, "failing": failing}

    # 8. Геодезические

    def check_geodesics(self) -> Dict[str, Any]:
        sphere = self.connection("sphere2")
        start = initial_state([math.pi / 2, 0.0], [0.0, 1.0])
        trajectory = integrate(sphere, start, 2 * math.pi, 10_000)
        deviation = max(abs(state.position[0] - math.pi / 2) for state in trajectory)
        speeds = speed_along(sphere, self.field("sphere2").g, trajectory)
        drift = max(abs(s - speeds[0]) for s in speeds) / abs(speeds[0])

        flat = self.field("flat3-omega")
        with_torsion = self.connection("flat3-omega")
        metric_only = levi_civita_symbols(flat.metric_only())
        origin = initial_state([0.1, -0.2, 0.3], [0.3, 0.2, -0.25])
        first = integrate(with_torsion, origin, 1.0, 200)
        second = integrate(metric_only, origin, 1.0, 200)
        difference = max(float(np.max(np.abs(a.position - b.position))) for a, b in zip(first, second))
        passed = deviation < 1e-6 and drift < 1e-8 and difference < 1e-9
        return {
            "passed": passed,
            "equator_deviation": deviation,
            "speed_drift": drift,
            "torsion_difference": difference,
        }

    # 9. Расщепление естественных уравнений

    def check_decomposition(self) -> Dict[str, Any]:
        report = decomposition_check(self.field("flat4-omega"))
        self.measured["antisymmetric_constant"] = report.antisymmetric.constant
        self.measured["symmetric_constant"] = report.symmetric.constant
        self.measured["symmetric_deviates_from_9_16"] = report.symmetric.deviates
        details = report.as_dict()
        details["passed"] = report.passed
        return details

    # 10. Суперметрики

    def check_super_reduction(self) -> Dict[str, Any]:
        problems = []
        sphere = self.model("sphere2")
        metric = make_super_metric(sphere.chart, sphere.texts)
        gamma = super_christoffel(metric)
        classical = self.connection("sphere2")
        n = sphere.chart.dimension
        indices3 = [(a, m, b) for a in range(n) for m in range(n) for b in range(n)]
        if not eq_randomized_tables(
            [gamma[i].body for i in indices3], [classical.gamma[i] for i in indices3], sphere.chart
        ):
            problems.append("Γ: чётная редукция")
        curvature = super_riemann(metric, gamma)
        classical_riemann = self.curvature("sphere2").riemann
        indices4 = list(curvature)
        if not eq_randomized_tables(
            [curvature[(g, b, a, v)].body for g, b, a, v in indices4],
            [classical_riemann[b, g, a, v] for g, b, a, v in indices4],
            sphere.chart,
        ):
            problems.append("R: чётная редукция")

        model = self.model("super-1|2")
        super_metric = model.super_metric()
        super_gamma = super_christoffel(super_metric)
        if super_parity_check(super_gamma, model.chart):
            problems.append("чётность Γ")
        if super_parity_check(super_riemann(super_metric, super_gamma), model.chart):
            problems.append("чётность R")
        if christoffel_signs(model.chart.parities) != (HAND_SIGNS_FIRST, HAND_SIGNS_SECOND):
            problems.append("таблица знаков")
        if not _matches_hand_expansion(super_metric, super_gamma):
            problems.append("Γ против ручного разложения")
        return {"passed": not problems, "problems": problems}


# Случайные мономы и законы алгебры


def random_monomial(algebra: FormAlgebra, rng: np.random.Generator) -> IteratedForm:
    chart = algebra.chart
    x, y = chart.symbols
    slot_sets = _slot_sets(algebra.depth)
    generators = []
    for _ in range(int(rng.integers(0, 4))):
        slots = slot_sets[int(rng.integers(0, len(slot_sets)))]
        generators.append(Generator(slots, int(rng.integers(0, chart.dimension))))
    a, b, c = (int(v) for v in rng.integers(-3, 4, size=3))
    coefficient = a + b * x + c * x * y**2
    return algebra.word(generators, coefficient if coefficient != 0 else 1)


def _slot_sets(depth: int) -> List[tuple[int, ...]]:
    slots = range(1, depth + 1)
    return [subset for size in slots for subset in combinations(slots, size)]


def _vanishes(form: IteratedForm) -> bool:
    return all(sp.expand(coeff) == 0 for coeff in form.terms.values())


def _same(first: IteratedForm, second: IteratedForm) -> bool:
    # сначала структурное сравнение, expand только для несовпавших коэффициентов
    if first.terms == second.terms:
        return True
    return _vanishes(first - second)


def _degree(algebra: FormAlgebra, form: IteratedForm) -> MultiDegree:
    return form.degree() if not form.is_zero() else MultiDegree.zero(algebra.depth)


def _derivation_rule(algebra, operator: MultiDegree, apply, a, b, ab: IteratedForm) -> bool:
    """D(ab) = D(a)b + (-1)^<D,a> a D(b)."""
    sign = koszul_sign(operator, _degree(algebra, a))
    expected = product(apply(a), b) + product(a, apply(b)).scale(sign)
    return _same(apply(ab), expected)


def _commutativity(algebra, a, b, _c) -> bool:
    sign = koszul_sign(_degree(algebra, a), _degree(algebra, b))
    return _same(product(a, b), product(b, a).scale(sign))


def _associativity(algebra, a, b, c) -> bool:
    return _same(product(a, product(b, c)), product(product(a, b), c))


def _nilpotency(algebra, a, _b, _c) -> bool:
    return all(_vanishes(differential(i, differential(i, a))) for i in range(1, algebra.depth + 1))


def _differentials_commute(algebra, a, _b, _c) -> bool:
    return all(
        _same(differential(i, differential(j, a)), differential(j, differential(i, a)))
        for i, j in combinations(range(1, algebra.depth + 1), 2)
    )


def _involution(algebra, a, _b, _c) -> bool:
    return (
        _same(kappa(kappa(a)), a)
        and _same(kappa(differential(1, kappa(a))), differential(2, a))
        and _same(kappa(differential(2, kappa(a))), differential(1, a))
    )


def _kappa_multiplicative(algebra, a, b, _c) -> bool:
    return _same(kappa(product(a, b)), product(kappa(a), kappa(b)))


def _leibniz(algebra, a, b, _c) -> bool:
    ab = product(a, b)
    for slot in range(1, algebra.depth + 1):
        operator = MultiDegree.of_slots((slot,), algebra.depth)
        if not _derivation_rule(algebra, operator, partial(differential, slot), a, b, ab):
            return False
    return True


def _insertion_leibniz(algebra, a, b, _c) -> bool:
    chart = algebra.chart
    x, y = chart.symbols
    vector = [y, x**2] + [0] * (chart.dimension - 2)
    ab = product(a, b)
    for slots in _slot_sets(2):
        for coord in range(chart.dimension):
            operator = SlotInsertion(slots, coord)
            if not _derivation_rule(algebra, operator.degree(algebra), operator.apply, a, b, ab):
                return False
    for slot in (1, 2):
        degree = MultiDegree.of_slots((slot,), algebra.depth, sign=-1)
        if not _derivation_rule(algebra, degree, partial(insert_field, slot, vector), a, b, ab):
            return False
    return True


# Законы на Λ_2
ALGEBRA_LAWS: Dict[str, Callable[..., bool]] = {
    "commutativity": _commutativity,
    "associativity": _associativity,
    "nilpotency": _nilpotency,
    "differentials-commute": _differentials_commute,
    "involution": _involution,
    "kappa-multiplicative": _kappa_multiplicative,
    "leibniz": _leibniz,
    "insertion-leibniz": _insertion_leibniz,
}

# Законы на Λ_3
DEPTH3_LAWS: Dict[str, Callable[..., bool]] = {
    "nilpotency-depth3": _nilpotency,
    "differentials-commute-depth3": _differentials_commute,
    "leibniz-depth3": _leibniz,
}


def _matches_hand_expansion(metric, gamma) -> bool:
    """Γ для θ-независимой метрики 1|2 по знаковым таблицам, выписанным вручную."""
    chart = metric.chart
    x = chart.symbol(0)
    n = chart.dimension
    body = [[metric.g[i][j].body for j in range(n)] for i in range(n)]
    inverse = [[metric.g_inv[i][j].body for j in range(n)] for i in range(n)]

    def d(k: int, i: int, j: int):
        return sp.diff(body[i][j], x) if k == 0 else sp.Integer(0)

    expected, computed = [], []
    for alpha in range(n):
        for mu in range(n):
            for beta in range(n):
                total = sp.Integer(0)
                for g_ in range(n):
                    total += inverse[g_][alpha] * (
                        HAND_SIGNS_FIRST[mu][g_] * d(mu, beta, g_)
                        + HAND_SIGNS_SECOND[mu][beta][g_] * d(beta, mu, g_)
                        - d(g_, beta, mu)
                    )
                expected.append(total / 2)
                computed.append(gamma[(alpha, mu, beta)].body)
                if set(gamma[(alpha, mu, beta)].terms) - {()}:
                    return False
    return bool(eq_randomized_tables(computed, expected, chart))


# Глобальный экземпляр сервиса
selftest_service = SelfTestService()


def run_selftest(name_filter: str | None = None) -> Tuple[List[CheckResult], dict]:
    results = selftest_service.run(name_filter)
    return results, selftest_service.conventions()
