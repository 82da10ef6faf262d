from . import universe
from .linalg import in_span, nullspace, solve_affine
from .poly import Poly, const, monomials, var
from .rational import RationalExpr, as_rational, evaluate, partial_derive, substitute
from .scalar import BACKEND, Q, to_scalar

__all__ = [
    "BACKEND",
    "Poly",
    "Q",
    "RationalExpr",
    "as_rational",
    "const",
    "evaluate",
    "in_span",
    "monomials",
    "nullspace",
    "partial_derive",
    "solve_affine",
    "substitute",
    "to_scalar",
    "universe",
    "var",
]
