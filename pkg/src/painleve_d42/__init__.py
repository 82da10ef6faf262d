"""Exact verification toolkit for a six-dimensional coupled Painleve Hamiltonian
system with affine Weyl group symmetry of type D4^(2)."""
from .algebra import BACKEND as SCALAR_BACKEND
from .algebra import Poly, RationalExpr
from .hamiltonian import HamiltonianSystem, build_H, build_hamiltonian, poisson_bracket

__version__ = "0.1.0"

__all__ = [
    "SCALAR_BACKEND",
    "HamiltonianSystem",
    "Poly",
    "RationalExpr",
    "build_H",
    "build_hamiltonian",
    "poisson_bracket",
]
