"""Вычислительное ядро: итерированные формы, связности, кривизна, суперметрики."""

from .charts import Chart, SamplingDomain, SuperChart, make_chart, parameter_chart
from .connection import (
    Connection,
    Curvature,
    OracleVerdict,
    TensorField2,
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
    riemann,
    split,
    torsion,
    torsion_form,
)
from .geodesics import (
    CurveState,
    GeodesicIntegrator,
    geodesic_curvature,
    initial_state,
    integrate,
    speed_along,
    trajectory_curvature,
)
from .graded_forms import (
    FormAlgebra,
    FormDerivation,
    Generator,
    IteratedForm,
    MultiDegree,
    apply_derivation,
    differential,
    embed_tensor,
    extract_components,
    insert_field,
    insert_insertion,
    insert_slot,
    kappa,
    koszul_sign,
    lie,
    product,
)
from .relativity import (
    DecompositionReport,
    FitResult,
    ResidualReport,
    decomposition_check,
    einstein_split_residual,
    natural_residual,
)
from .scalar_expr import (
    EqualityVerdict,
    compile_table,
    eq_randomized,
    eq_randomized_tables,
    eval_at,
    parse,
    partial,
    to_text,
)
from .supergeometry import (
    SuperMetric,
    SuperScalar,
    make_super_metric,
    parse_super,
    riemann_exchange_defect,
    super_christoffel,
    super_inverse_metric,
    super_mul,
    super_parity_check,
    super_partial,
    super_riemann,
)

__all__ = [
    "Chart",
    "SamplingDomain",
    "SuperChart",
    "make_chart",
    "parameter_chart",
    "Connection",
    "Curvature",
    "OracleVerdict",
    "TensorField2",
    "christoffel_first",
    "christoffel_form",
    "christoffel_form_components",
    "closing_identity_tables",
    "covariant_derivative",
    "curvature_commutator_oracle",
    "inverse_metric",
    "levi_civita_form_operator",
    "levi_civita_symbols",
    "lowered_torsion",
    "make_tensor_field",
    "metric_form",
    "metric_pairing",
    "nabla_tower",
    "ricci",
    "riemann",
    "split",
    "torsion",
    "torsion_form",
    "CurveState",
    "GeodesicIntegrator",
    "geodesic_curvature",
    "initial_state",
    "integrate",
    "speed_along",
    "trajectory_curvature",
    "FormAlgebra",
    "FormDerivation",
    "Generator",
    "IteratedForm",
    "MultiDegree",
    "apply_derivation",
    "differential",
    "embed_tensor",
    "extract_components",
    "insert_field",
    "insert_insertion",
    "insert_slot",
    "kappa",
    "koszul_sign",
    "lie",
    "product",
    "DecompositionReport",
    "FitResult",
    "ResidualReport",
    "decomposition_check",
    "einstein_split_residual",
    "natural_residual",
    "EqualityVerdict",
    "compile_table",
    "eq_randomized",
    "eq_randomized_tables",
    "eval_at",
    "parse",
    "partial",
    "to_text",
    "SuperMetric",
    "SuperScalar",
    "make_super_metric",
    "parse_super",
    "riemann_exchange_defect",
    "super_christoffel",
    "super_inverse_metric",
    "super_mul",
    "super_parity_check",
    "super_partial",
    "super_riemann",
]
