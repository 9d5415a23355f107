"""Exact-arithmetic toolkit for companion and PB-companion ULH matrices."""

from .exprpoly import (
    LAM,
    MINUS_INF,
    Indet,
    Polynomial,
    Rational,
    lam_power,
    par,
    parse_expr,
    xvar,
)
from .matrices import (
    Pattern,
    SymMatrix,
    Window,
    order_prec,
    parse_matrix_text,
    prec_key,
    render_matrix_text,
)
from .verdict import Condition, Verdict
from .families import ClassLabel, base_matrix, classify_matrix, classify_pattern
from .companion import (
    CompanionReport,
    NestedSpec,
    build_newton_companion,
    companion_target,
    fiedler_below_diag_test,
    g_hat_companion_test,
    is_companion_direct,
    is_companion_structural,
    nested_membership,
    nilpotent_complete,
    parameterize_g,
)
from .pbcompanion import (
    PBReport,
    basis_polynomials,
    concatenation,
    degree_profile_check,
    is_pb_companion,
    length_le2_criterion,
    ma_matrix,
    pb_via_blocks,
)
from .enumeration import (
    Digraph,
    SearchResult,
    build_digraph,
    digraphs_isomorphic,
    enumerate_patterns,
    fiedler_mixed_superpattern_search,
)

__version__ = "0.1.0"

__all__ = [
    "LAM",
    "MINUS_INF",
    "Indet",
    "Polynomial",
    "Rational",
    "lam_power",
    "par",
    "parse_expr",
    "xvar",
    "Pattern",
    "SymMatrix",
    "Window",
    "order_prec",
    "parse_matrix_text",
    "prec_key",
    "render_matrix_text",
    "Condition",
    "Verdict",
    "ClassLabel",
    "base_matrix",
    "classify_matrix",
    "classify_pattern",
    "CompanionReport",
    "NestedSpec",
    "build_newton_companion",
    "companion_target",
    "fiedler_below_diag_test",
    "g_hat_companion_test",
    "is_companion_direct",
    "is_companion_structural",
    "nested_membership",
    "nilpotent_complete",
    "parameterize_g",
    "PBReport",
    "basis_polynomials",
    "concatenation",
    "degree_profile_check",
    "is_pb_companion",
    "length_le2_criterion",
    "ma_matrix",
    "pb_via_blocks",
    "Digraph",
    "SearchResult",
    "build_digraph",
    "digraphs_isomorphic",
    "enumerate_patterns",
    "fiedler_mixed_superpattern_search",
]
