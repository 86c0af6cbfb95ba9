"""Exact scalar/series arithmetic and polynomial exterior calculus on charts."""

from .charts import Chart, ChartMismatchError, ProductChart, as_point
from .exprs import (
    ExprError,
    GradedValue,
    format_parts,
    format_poly,
    format_tensor,
    parse_diff_form,
    parse_multivector,
    parse_polyfunc,
    parse_value,
)
from .poly import PolyFunc
from .scalars import (
    DEFAULT_ORDER,
    MAX_ORDER,
    FormalSeries,
    PeriodProductError,
    Scalar,
)
from .simplex import (
    AffineSimplex,
    integrate_over_chain,
    integrate_over_simplex,
    poincare_homotopy,
)
from .tensors import (
    DiffForm,
    Multivector,
    bivector_on_forms,
    de_rham_d,
    embed_poly,
    embed_tensor,
    form_on_vectors,
    interior,
    lie_derivative_form,
    pairing_form_multivector,
    pi_sharp,
    restrict_poly,
    schouten_bracket,
    wedge3_contraction,
)

__all__ = [
    "AffineSimplex",
    "Chart",
    "ChartMismatchError",
    "DEFAULT_ORDER",
    "DiffForm",
    "ExprError",
    "FormalSeries",
    "GradedValue",
    "MAX_ORDER",
    "Multivector",
    "PeriodProductError",
    "PolyFunc",
    "ProductChart",
    "Scalar",
    "as_point",
    "bivector_on_forms",
    "de_rham_d",
    "embed_poly",
    "embed_tensor",
    "form_on_vectors",
    "format_parts",
    "format_poly",
    "format_tensor",
    "integrate_over_chain",
    "integrate_over_simplex",
    "interior",
    "lie_derivative_form",
    "pairing_form_multivector",
    "parse_diff_form",
    "parse_multivector",
    "parse_polyfunc",
    "parse_value",
    "pi_sharp",
    "poincare_homotopy",
    "restrict_poly",
    "schouten_bracket",
    "wedge3_contraction",
]
