"""Exact Krein-like functionals of the Laguerre, Hermite and Jacobi polynomials.

``J = int w(x)^beta x^s p_m1(x) ... p_mr(x) dx`` evaluated by three
independent closed-form routes (Lauricella / Srivastava-Daoust series,
second-order-equation expansions, algebraic linearization) and checked
against a monomial-expansion oracle and quadrature.
"""

from .errors import (
    AccuracyError,
    KreinError,
    MixedRadicalError,
    NotExactError,
    NotTerminatingError,
    PoleError,
    PreconditionError,
    RouteInapplicable,
)
from .exact import ApproxValue, ExactValue, format_scalar, parse_scalar
from .krein import (
    EvaluationReport,
    FunctionalRequest,
    clear_caches,
    evaluate,
    evaluate_value,
    make_request,
)
from .moments import (
    MomentRequest,
    exp_functional,
    krein_moment,
    log_moment,
    moment,
    power_moment,
    weight_log_functional,
)
from .oracle import oracle_functional, quad_functional
from .polys import FamilySpec, MonomialPoly, norm_h, poly_coeffs

__all__ = [
    "AccuracyError", "ApproxValue", "EvaluationReport", "ExactValue", "FamilySpec",
    "FunctionalRequest", "KreinError", "MixedRadicalError", "MomentRequest", "MonomialPoly",
    "NotExactError", "NotTerminatingError", "PoleError", "PreconditionError",
    "RouteInapplicable", "clear_caches", "evaluate", "evaluate_value", "exp_functional",
    "format_scalar", "krein_moment", "log_moment", "make_request", "moment", "norm_h",
    "oracle_functional", "parse_scalar", "poly_coeffs", "power_moment", "quad_functional",
    "weight_log_functional",
]
