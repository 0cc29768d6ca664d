"""Связность тензора τ = g + ω: символы Кристоффеля двумя путями, кручение, кривизна, башня ∇."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, List, Literal, Sequence

import numpy as np
import sympy as sp
from sympy.combinatorics import Permutation

from app.settings import config
from app.shared.errors import (
    DegenerateMetricError,
    DimensionError,
    InconsistencyError,
    InputError,
    TorsionMismatchError,
    TowerMismatchError,
)

from .charts import Chart
from .graded_forms import (
    CoordinatePartial,
    FormAlgebra,
    FormDerivation,
    Generator,
    IteratedForm,
    SlotInsertion,
    apply_derivation,
    differential,
    embed_tensor,
    extract_components,
    insert_field,
    insert_insertion,
    insert_slot,
    kappa,
    product,
)
from .scalar_expr import (
    EqualityVerdict,
    ScalarExpr,
    compile_table,
    draw_point,
    eq_randomized_tables,
    sample_points,
)

logger = logging.getLogger(__name__)

Provenance = Literal["coordinate", "operator"]


# Таблицы компонент


def build_array(shape: Sequence[int], entry: Callable[[tuple[int, ...]], ScalarExpr]) -> sp.Array:
    indices = itertools.product(*(range(size) for size in shape))
    return sp.Array([sp.sympify(entry(index)) for index in indices], tuple(shape))


def table_entries(table) -> List[ScalarExpr]:
    """Компоненты таблицы в лексикографическом порядке индексов."""
    if isinstance(table, sp.MatrixBase):
        return list(table)
    if isinstance(table, sp.Expr):
        return [table]
    indices = itertools.product(*(range(size) for size in table.shape))
    return [table[index] for index in indices]


def tables_agree(first, second, chart: Chart) -> EqualityVerdict:
    return eq_randomized_tables(table_entries(first), table_entries(second), chart)


def antisymmetrize(shape_size: int, entry: Callable[[tuple[int, ...]], ScalarExpr], rank: int) -> sp.Array:
    """Антисимметризация [..] с весом 1/m!."""
    weight = sp.Rational(1, sp.factorial(rank))
    perms = [Permutation(list(p)) for p in itertools.permutations(range(rank))]

    def value(index: tuple[int, ...]) -> ScalarExpr:
        total = sp.Integer(0)
        for perm in perms:
            permuted = tuple(index[perm.array_form[k]] for k in range(rank))
            total += perm.signature() * entry(permuted)
        return weight * total

    return build_array((shape_size,) * rank, value)


# Поле τ и метрика


@dataclass(frozen=True)
class TensorField2:
    """Ковариантный 2-тензор τ с разложением на g и ω."""

    chart: Chart
    tau: sp.ImmutableMatrix
    g: sp.ImmutableMatrix
    omega: sp.ImmutableMatrix
    g_inv: sp.ImmutableMatrix

    @property
    def dimension(self) -> int:
        return self.chart.dimension

    @property
    def has_torsion(self) -> bool:
        return any(entry != 0 for entry in self.omega)

    def metric_only(self) -> "TensorField2":
        """То же поле без кососимметричной части."""
        zero = sp.ImmutableMatrix.zeros(self.dimension, self.dimension)
        return TensorField2(self.chart, self.g, self.g, zero, self.g_inv)


def split(tau: sp.MatrixBase) -> tuple[sp.ImmutableMatrix, sp.ImmutableMatrix]:
    """τ = g + ω: симметричная и кососимметричная части."""
    tau = sp.ImmutableMatrix(tau)
    if tau.rows != tau.cols:
        raise DimensionError("Матрица τ должна быть квадратной")
    half = sp.Rational(1, 2)
    g = sp.ImmutableMatrix(tau.rows, tau.cols, lambda i, j: half * (tau[i, j] + tau[j, i]))
    omega = sp.ImmutableMatrix(tau.rows, tau.cols, lambda i, j: half * (tau[i, j] - tau[j, i]))
    return g, omega


def _check_determinant(det: ScalarExpr, chart: Chart) -> None:
    domain = chart.domain
    rng = domain.sampler()
    table = compile_table([det], chart)
    for _ in range(domain.trials):
        point, values = draw_point(domain, rng, table)
        if abs(values[0]) < config.DET_FLOOR:
            raise DegenerateMetricError(point, float(values[0]))


def inverse_metric(g: sp.MatrixBase, chart: Chart) -> sp.ImmutableMatrix:
    """Символьная обратная матрица через присоединённую и определитель."""
    g = sp.Matrix(g)
    n = g.rows
    if n > config.MAX_DIMENSION:
        raise DimensionError(f"Размерность {n} превышает допустимую ({config.MAX_DIMENSION})")
    if g.is_diagonal():
        det = sp.Mul(*[g[i, i] for i in range(n)])
        _check_determinant(det, chart)
        return sp.ImmutableMatrix(sp.diag(*[1 / g[i, i] for i in range(n)]))
    det = g.det(method="berkowitz")
    _check_determinant(det, chart)
    inverse = g.adjugate().applyfunc(lambda entry: entry / det)
    logger.debug("Обращена метрика размерности %d", n)
    return sp.ImmutableMatrix(inverse)


def make_tensor_field(chart: Chart, tau: sp.MatrixBase) -> TensorField2:
    tau = sp.ImmutableMatrix(tau)
    if tau.rows != chart.dimension:
        raise DimensionError("Размер матрицы τ не совпадает с размерностью карты")
    g, omega = split(tau)
    return TensorField2(chart, tau, g, omega, inverse_metric(g, chart))


def metric_form(field: TensorField2, algebra: FormAlgebra | None = None) -> IteratedForm:
    """ι₂(g) = g_{mu nu} d1x^mu d2x^nu."""
    algebra = algebra or FormAlgebra(field.chart, 2)
    return embed_tensor(algebra, sp.Array(field.g.tolist()))


def metric_pairing(field: TensorField2, x: Sequence[ScalarExpr], y: Sequence[ScalarExpr]) -> ScalarExpr:
    """(i^(2)_Y ∘ i^(1)_X)(g) = g(X, Y)."""
    form = insert_field(2, y, insert_field(1, x, metric_form(field)))
    return form.terms.get((), sp.Integer(0))


# Символы Кристоффеля


def _tau_derivatives(field: TensorField2) -> sp.Array:
    """dtau[mu, a, b] = ∂_mu τ_ab."""
    n = field.dimension
    symbols = field.chart.symbols
    return build_array((n, n, n), lambda i: sp.diff(field.tau[i[1], i[2]], symbols[i[0]]))


def christoffel_first(field: TensorField2) -> sp.Array:
    """γ[δ, β, μ] = ∂_μ τ_βδ + ∂_β τ_δμ − ∂_δ τ_βμ."""
    n = field.dimension
    dtau = _tau_derivatives(field)
    return build_array(
        (n, n, n),
        lambda i: dtau[i[2], i[1], i[0]] + dtau[i[1], i[0], i[2]] - dtau[i[0], i[1], i[2]],
    )


def christoffel_form(field: TensorField2, algebra: FormAlgebra | None = None) -> IteratedForm:
    """γ = −d₂ d₁ ι₂(τ)."""
    algebra = algebra or FormAlgebra(field.chart, 2)
    embedded = embed_tensor(algebra, sp.Array(field.tau.tolist()))
    return -differential(2, differential(1, embedded))


def christoffel_form_components(form: IteratedForm) -> sp.Array:
    """Коэффициенты при d1x^β d2x^μ d2d1x^δ как таблица [δ, β, μ]."""
    n = form.algebra.chart.dimension
    return build_array(
        (n, n, n),
        lambda i: form.coefficient(
            [Generator((1,), i[1]), Generator((2,), i[2]), Generator((1, 2), i[0])]
        ),
    )


@dataclass(frozen=True)
class Connection:
    """Γ[α, μ, β]: α верхний, μ направление (слот d2), β аргумент (слот d1)."""

    chart: Chart
    gamma: sp.Array
    torsion: sp.Array
    provenance: Provenance

    @property
    def dimension(self) -> int:
        return self.chart.dimension


def _connection(chart: Chart, gamma: sp.Array, provenance: Provenance) -> Connection:
    n = chart.dimension
    torsion_table = build_array((n, n, n), lambda i: gamma[i] - gamma[i[0], i[2], i[1]])
    return Connection(chart, gamma, torsion_table, provenance)


def levi_civita_symbols(field: TensorField2) -> Connection:
    """Γ^α_{μβ} = ½ g^{αδ} γ_{δ,βμ}."""
    n = field.dimension
    gamma_first = christoffel_first(field)
    half = sp.Rational(1, 2)
    gamma = build_array(
        (n, n, n),
        lambda i: half * sum((field.g_inv[i[0], d] * gamma_first[d, i[2], i[1]] for d in range(n)), sp.Integer(0)),
    )
    logger.debug("Символы Кристоффеля (координатный путь), n=%d", n)
    return _connection(field.chart, gamma, "coordinate")


def rceil(field: TensorField2, big: IteratedForm, small: IteratedForm) -> IteratedForm:
    """⌉₂^g(Ω)(ω) = (−1)^{|Ω|·(0,−1)} ½ g^{μν} (i^(2)_{i_∂μ} Ω)(i_∂ν ω)."""
    degree = big.degree()
    sign = -1 if degree.degrees[1] % 2 else 1
    n = field.dimension
    inserted = [insert_insertion(mu, big) for mu in range(n)]
    evaluated = [insert_slot((1,), nu, small) for nu in range(n)]
    result = big.algebra.zero()
    for mu in range(n):
        for nu in range(n):
            factor = field.g_inv[mu, nu]
            if factor == 0 or inserted[mu].is_zero() or evaluated[nu].is_zero():
                continue
            result = result + product(inserted[mu], evaluated[nu]).scale(sp.Rational(sign, 2) * factor)
    return result


def levi_civita_form_operator(field: TensorField2) -> Connection:
    """Γ = ⌉₂^g(γ), извлечённая из форм Γ(d1x^σ)."""
    n = field.dimension
    algebra = FormAlgebra(field.chart, 2)
    gamma_form = christoffel_form(field, algebra)
    leading, expected, entries = [], [], {}
    for sigma in range(n):
        image = rceil(field, gamma_form, algebra.generator((1,), sigma))
        for monomial in image.terms:
            shape = tuple(g.slots for g in monomial)
            if shape not in (((1, 2),), ((1,), (2,))):
                raise InconsistencyError(f"Лишний моном в Γ(d1x^{field.chart.names[sigma]})")
        for beta in range(n):
            leading.append(image.coefficient([Generator((1, 2), beta)]))
            expected.append(sp.Integer(1 if beta == sigma else 0))
            for mu in range(n):
                entries[(sigma, mu, beta)] = image.coefficient([Generator((1,), beta), Generator((2,), mu)])
    verdict = eq_randomized_tables(leading, expected, field.chart)
    if not verdict:
        raise InconsistencyError("Коэффициент при d1d2x не равен единице: нарушено правило знаков")
    gamma = build_array((n, n, n), lambda i: entries[i])
    logger.debug("Символы Кристоффеля (операторный путь), n=%d", n)
    return _connection(field.chart, gamma, "operator")


def connection_form(c: Connection, algebra: FormAlgebra | None = None) -> FormDerivation:
    """Γ = (d1d2x^α + Γ^α_{μβ} d1x^β d2x^μ) i_∂α."""
    algebra = algebra or FormAlgebra(c.chart, 2)
    n = c.dimension
    derivation = FormDerivation(algebra)
    for alpha in range(n):
        coefficient = algebra.generator((1, 2), alpha)
        for mu in range(n):
            for beta in range(n):
                entry = c.gamma[alpha, mu, beta]
                if entry != 0:
                    coefficient = coefficient + algebra.word(
                        [Generator((1,), beta), Generator((2,), mu)], entry
                    )
        derivation = derivation.with_term(coefficient, SlotInsertion((1,), alpha))
    return derivation


# Кручение


def antisymmetrized_omega_derivative(field: TensorField2) -> sp.Array:
    """H[μ, ν, γ] = ∂_[μ ω_νγ]."""
    symbols = field.chart.symbols
    return antisymmetrize(
        field.dimension, lambda i: sp.diff(field.omega[i[1], i[2]], symbols[i[0]]), 3
    )


def torsion(c: Connection, field: TensorField2) -> sp.Array:
    """T^α_{μβ} = Γ^α_{μβ} − Γ^α_{βμ}, сверенное с 3 g^{αδ} ∂_[μ ω_βδ]."""
    n = c.dimension
    h = antisymmetrized_omega_derivative(field)
    alternative = build_array(
        (n, n, n),
        lambda i: 3 * sum((field.g_inv[i[0], d] * h[i[1], i[2], d] for d in range(n)), sp.Integer(0)),
    )
    verdict = tables_agree(c.torsion, alternative, c.chart)
    if not verdict:
        raise TorsionMismatchError(
            f"Кручение расходится с 3g∂[ω] в компоненте {verdict.component} в точке {verdict.witness}"
        )
    return c.torsion


def torsion_form(c: Connection) -> sp.Array:
    """Кручение как Γ − κ(Γ) на формах d1x^σ: коэффициенты при d1x^β d2x^μ."""
    n = c.dimension
    algebra = FormAlgebra(c.chart, 2)
    derivation = connection_form(c, algebra)
    entries = {}
    for sigma in range(n):
        image = apply_derivation(derivation, algebra.generator((1,), sigma))
        difference = image - kappa(image)
        for mu in range(n):
            for beta in range(n):
                entries[(sigma, mu, beta)] = difference.coefficient(
                    [Generator((1,), beta), Generator((2,), mu)]
                )
    return build_array((n, n, n), lambda i: entries[i])


def lowered_torsion(c: Connection, field: TensorField2) -> sp.Array:
    """T_{αμβ} = g_{αδ} T^δ_{μβ}."""
    n = c.dimension
    return build_array(
        (n, n, n),
        lambda i: sum((field.g[i[0], d] * c.torsion[d, i[1], i[2]] for d in range(n)), sp.Integer(0)),
    )


def torsion_action(c: Connection, omega: sp.MatrixBase) -> sp.Array:
    """T(ω)[α, ν, μ] = ½ (T^β_{νμ} ω_αβ − T^β_{αμ} ω_νβ)."""
    n = c.dimension
    half = sp.Rational(1, 2)
    return build_array(
        (n, n, n),
        lambda i: half
        * sum(
            (c.torsion[b, i[1], i[2]] * omega[i[0], b] - c.torsion[b, i[0], i[2]] * omega[i[1], b] for b in range(n)),
            sp.Integer(0),
        ),
    )


# Кривизна


@dataclass(frozen=True)
class Curvature:
    """R[σ, μ, δ, α] = R_{σμ}{}_δ^α и Ricci[μ, δ] = R_{μα}{}_δ^α."""

    chart: Chart
    riemann: sp.Array
    ricci: sp.ImmutableMatrix


def _gamma_derivatives(c: Connection) -> sp.Array:
    """dgamma[σ, α, μ, β] = ∂_σ Γ^α_{μβ}."""
    n = c.dimension
    symbols = c.chart.symbols
    return build_array((n, n, n, n), lambda i: sp.diff(c.gamma[i[1], i[2], i[3]], symbols[i[0]]))


def riemann(c: Connection) -> Curvature:
    n = c.dimension
    gamma = c.gamma
    dgamma = _gamma_derivatives(c)

    def entry(index: tuple[int, ...]) -> ScalarExpr:
        sigma, mu, delta, alpha = index
        value = dgamma[sigma, alpha, mu, delta] - dgamma[mu, alpha, sigma, delta]
        for beta in range(n):
            value += gamma[alpha, sigma, beta] * gamma[beta, mu, delta]
            value -= gamma[alpha, mu, beta] * gamma[beta, sigma, delta]
        return value

    table = build_array((n, n, n, n), entry)
    logger.debug("Тензор Римана, n=%d", n)
    return Curvature(c.chart, table, ricci_from(table))


def ricci_from(table: sp.Array) -> sp.ImmutableMatrix:
    n = table.shape[0]
    return sp.ImmutableMatrix(
        n, n, lambda mu, delta: sum((table[mu, a, delta, a] for a in range(n)), sp.Integer(0))
    )


def ricci(cv: Curvature) -> sp.ImmutableMatrix:
    return cv.ricci


# Ковариантные производные


def covariant_derivative(c: Connection, s) -> sp.Array:
    """(∇s)[β1..βk, μ] = ∂_μ s − Σ_i Γ^α_{μβ_i} s[.. α ..]."""
    n = c.dimension
    symbols = c.chart.symbols
    if isinstance(s, (sp.Expr, int)):
        scalar = sp.sympify(s)
        return build_array((n,), lambda i: sp.diff(scalar, symbols[i[0]]))
    s = sp.Array(s)
    rank = s.rank()

    def entry(index: tuple[int, ...]) -> ScalarExpr:
        betas, mu = index[:-1], index[-1]
        value = sp.diff(s[betas], symbols[mu])
        for position in range(rank):
            for alpha in range(n):
                coeff = c.gamma[alpha, mu, betas[position]]
                if coeff != 0:
                    replaced = betas[:position] + (alpha,) + betas[position + 1 :]
                    value -= coeff * s[replaced]
        return value

    return build_array((n,) * (rank + 1), entry)


def _correction_coefficient(
    algebra: FormAlgebra, c: Connection, mu: int, alpha: int, slots: tuple[int, ...]
) -> IteratedForm:
    """d_{S∖max S}(Γ^α_{μβ} d_{max S}x^β) для множества слотов S."""
    top = slots[-1]
    inner = algebra.zero()
    for beta in range(c.dimension):
        entry = c.gamma[alpha, mu, beta]
        if entry != 0:
            inner = inner + algebra.word([Generator((top,), beta)], entry)
    for slot in reversed(slots[:-1]):
        inner = differential(slot, inner)
    return inner


def nabla_operator(c: Connection, k: int, algebra: FormAlgebra | None = None) -> FormDerivation:
    """∇ᵏ = d_{k+1}x^μ (∂_μ − Σ_S d_{S∖max S}(Γ^α_{μβ} d_{max S}x^β) i_{S,∂α})."""
    algebra = algebra or FormAlgebra(c.chart, k + 1)
    algebra.check_slot(k + 1)
    n = c.dimension
    slot_sets = [
        subset
        for size in range(1, k + 1)
        for subset in itertools.combinations(range(1, k + 1), size)
    ]
    derivation = FormDerivation(algebra)
    for mu in range(n):
        direction = algebra.generator((k + 1,), mu)
        derivation = derivation.with_term(direction, CoordinatePartial(mu))
        for slots in slot_sets:
            for alpha in range(n):
                correction = _correction_coefficient(algebra, c, mu, alpha, slots)
                if correction.is_zero():
                    continue
                derivation = derivation.with_term(-product(direction, correction), SlotInsertion(slots, alpha))
    return derivation


def nabla_tower(k: int, c: Connection, s, depth_cap: int | None = None) -> sp.Array:
    """Компоненты ∇ᵏ ι_k(s), сверенные с covariant_derivative; depth_cap ограничивает k + 1."""
    depth_cap = config.DEPTH_CAP if depth_cap is None else depth_cap
    if k > depth_cap - 1:
        raise InputError(f"Глубина башни k={k} превышает предел {depth_cap - 1}")
    algebra = FormAlgebra(c.chart, k + 1)
    embedded = embed_tensor(algebra, s)
    image = apply_derivation(nabla_operator(c, k, algebra), embedded)
    components = extract_components(image, k + 1)
    reference = covariant_derivative(c, s)
    verdict = tables_agree(components, reference, c.chart)
    if not verdict:
        raise TowerMismatchError(
            f"∇^{k} расходится с покомпонентной производной в компоненте {verdict.component}"
        )
    return components


def closing_identity_tables(field: TensorField2, depth_cap: int | None = None) -> tuple[sp.Array, sp.Array]:
    """Левая и правая части ∇²τ = ∇_g²ω + T(ω)."""
    c_tau = levi_civita_symbols(field)
    c_metric = levi_civita_symbols(field.metric_only())
    lhs = nabla_tower(2, c_tau, sp.Array(field.tau.tolist()), depth_cap)
    metric_part = covariant_derivative(c_metric, sp.Array(field.omega.tolist()))
    action = torsion_action(c_tau, field.omega)
    n = field.dimension
    rhs = build_array((n, n, n), lambda i: metric_part[i] + action[i])
    return lhs, rhs


# Независимая численная проверка кривизны


@dataclass(slots=True, frozen=True)
class OracleVerdict:
    passed: bool
    worst_deviation: float
    worst_point: tuple[float, ...] | None
    worst_component: tuple[int, ...] | None
    points: int
    tolerance: float


def curvature_commutator_oracle(
    c: Connection,
    curvature: Curvature | None = None,
    points: Sequence[Sequence[float]] | None = None,
    tolerance: float | None = None,
) -> OracleVerdict:
    """Сравнивает R с (∇_X∇_Y − ∇_Y∇_X)Z для координатных полей по конечным разностям Γ."""
    n = c.dimension
    curvature = curvature or riemann(c)
    tolerance = tolerance or config.ORACLE_TOLERANCE
    step = config.FD_STEP
    gamma_entries = table_entries(c.gamma)
    gamma_table = compile_table(gamma_entries, c.chart)
    riemann_table = compile_table(table_entries(curvature.riemann), c.chart)
    if points is None:
        points = sample_points(c.chart, config.SAMPLE_POINTS, gamma_entries)

    def gamma_at(point: np.ndarray) -> np.ndarray:
        return gamma_table(point).reshape(n, n, n)

    worst, worst_point, worst_component = 0.0, None, None
    passed = True
    for raw_point in points:
        point = np.asarray(raw_point, dtype=float)
        gamma = gamma_at(point)
        derivative = np.empty((n, n, n, n))
        for sigma in range(n):
            shift = np.zeros(n)
            shift[sigma] = step
            derivative[sigma] = (gamma_at(point + shift) - gamma_at(point - shift)) / (2 * step)
        # nested[σ, μ, δ, α] = (∇_∂σ ∇_∂μ ∂_δ)^α
        nested = derivative.transpose(0, 2, 3, 1) + np.einsum("asb,bmd->smda", gamma, gamma)
        oracle = nested - nested.transpose(1, 0, 2, 3)
        symbolic = riemann_table(point).reshape(n, n, n, n)
        deviation = np.abs(symbolic - oracle)
        position = np.unravel_index(int(np.argmax(deviation)), deviation.shape)
        if deviation[position] > worst:
            worst = float(deviation[position])
            worst_point = tuple(float(v) for v in point)
            worst_component = tuple(int(i) for i in position)
        if np.any(deviation > tolerance * (1.0 + np.abs(symbolic))):
            passed = False
    if not passed:
        logger.warning("Проверка кривизны не пройдена: отклонение %.3e в %s", worst, worst_point)
    return OracleVerdict(passed, worst, worst_point, worst_component, len(points), tolerance)
