"""Exact signature calculus for planar Boolean #CSP and Holant problems.

Everything is computed over the eighth cyclotomic field, so Hadamard
factors, powers of i, and the diagonal twists are all representable with
no rounding anywhere.  The package provides the signature algebra, exact
membership tests for the tractable families, polynomial-time evaluators
for each of them (including an FKT engine for planar matchgate grids),
brute-force oracles, and the three-way tractability classifier.
"""

from .scalar import (
    I,
    MINUS_ONE,
    ONE,
    SQRT2,
    ZERO,
    ZETA8,
    Scalar,
    i_power,
    parse_scalar,
    scalar_to_json,
    zeta_power,
)
from .signatures import (
    ARITY_CAP,
    Signature,
    SignatureMatrix,
    connect_binary,
    connect_unary,
    crossover,
    derivative,
    derivative_power,
    disequality,
    equality,
    exact_one,
    flip_var,
    link,
    normalize,
    pin,
    rotate,
    signature_matrix,
    tensor,
    unary,
)
from .transforms import (
    DIAG_I,
    DIAG_ZETA8,
    H2,
    H2_NORMALIZED,
    Transform2x2,
    apply_matrix,
    check_holant_invariance,
    is_transformable_given_t,
    scale_by_weight,
    transform,
)
from .classes import (
    AffineAnalysis,
    AffineSupport,
    ClassReport,
    MatchgateAnalysis,
    ProductAnalysis,
    Z4Polynomial,
    affine_support,
    class_report,
    compress,
    is_affine,
    is_degenerate,
    is_hadamard_matchgate,
    is_matchgate,
    is_product,
    is_twisted_affine,
    is_twisted_hadamard_matchgate,
    parity_of,
    primitive_decomposition,
    z4_polynomial,
)
from .grids import (
    CspInstance,
    SignatureGrid,
    brute_force_csp,
    brute_force_holant,
    csp_to_grid,
    eval_affine_csp,
    eval_product_csp,
    gate_signature,
    two_stretch,
    vandermonde_interpolate,
)
from .fkt import (
    MatchgateFragment,
    PlanarGraph,
    builtin_fragment,
    count_pm_fkt,
    enumerate_pm,
    evaluate_matchgate_grid,
    fragment_signature,
    kasteleyn_orient,
    pfaffian,
)
from .dichotomy import (
    DichotomyVerdict,
    classify_csp,
    classify_pl_csp,
    classify_pl_csp2_symmetric,
)

__all__ = [
    "ARITY_CAP",
    "AffineAnalysis",
    "AffineSupport",
    "ClassReport",
    "CspInstance",
    "DIAG_I",
    "DIAG_ZETA8",
    "DichotomyVerdict",
    "H2",
    "H2_NORMALIZED",
    "I",
    "MINUS_ONE",
    "MatchgateAnalysis",
    "MatchgateFragment",
    "ONE",
    "PlanarGraph",
    "ProductAnalysis",
    "SQRT2",
    "Scalar",
    "Signature",
    "SignatureGrid",
    "SignatureMatrix",
    "Transform2x2",
    "Z4Polynomial",
    "ZERO",
    "ZETA8",
    "affine_support",
    "apply_matrix",
    "brute_force_csp",
    "brute_force_holant",
    "builtin_fragment",
    "check_holant_invariance",
    "class_report",
    "classify_csp",
    "classify_pl_csp",
    "classify_pl_csp2_symmetric",
    "compress",
    "connect_binary",
    "connect_unary",
    "count_pm_fkt",
    "crossover",
    "csp_to_grid",
    "derivative",
    "derivative_power",
    "disequality",
    "enumerate_pm",
    "equality",
    "eval_affine_csp",
    "eval_product_csp",
    "evaluate_matchgate_grid",
    "exact_one",
    "flip_var",
    "fragment_signature",
    "gate_signature",
    "i_power",
    "is_affine",
    "is_degenerate",
    "is_hadamard_matchgate",
    "is_matchgate",
    "is_product",
    "is_transformable_given_t",
    "is_twisted_affine",
    "is_twisted_hadamard_matchgate",
    "kasteleyn_orient",
    "link",
    "normalize",
    "parity_of",
    "parse_scalar",
    "pfaffian",
    "pin",
    "primitive_decomposition",
    "rotate",
    "scalar_to_json",
    "scale_by_weight",
    "signature_matrix",
    "tensor",
    "transform",
    "two_stretch",
    "unary",
    "vandermonde_interpolate",
    "z4_polynomial",
    "zeta_power",
]
