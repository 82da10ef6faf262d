"""The six-dimensional Hamiltonian system, its Poisson structure and flow.

Bracket convention: ``{y, x} = {w, z} = {p, q} = 1``, i.e. for each
canonical pair ``(u, v)`` in ``PAIRS``

    {f, g} = sum  df/dv * dg/du - df/du * dg/dv,

so that the total derivative along the flow is ``dg/dt = {H, g} + dg/dt``
(the last term being the explicit time derivative). This reproduces
``x' = dH/dy``, ``y' = -dH/dx`` and likewise for ``(z, w)`` and ``(q, p)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import universe as U
from .algebra.linalg import nullspace
from .algebra.poly import Poly, monomials, var
from .algebra.rational import RationalExpr
from .algebra.scalar import Q, to_scalar
from .errors import BudgetExceeded

PAIRS = ((U.X, U.Y), (U.Z, U.W), (U.QV, U.P))

x, y, z, w, q, p, t = (var(v) for v in ("x", "y", "z", "w", "q", "p", "t"))
alpha0, alpha1, alpha2, alpha3 = (var(a) for a in ("alpha0", "alpha1", "alpha2", "alpha3"))
inv_t = var("t", -1)


def eliminate_alpha0(f):
    """Rewrite ``f`` with ``alpha0 -> 1 - alpha1 - alpha2 - alpha3``."""
    repl = 1 - alpha1 - alpha2 - alpha3
    if isinstance(f, RationalExpr):
        if f.num.free_of(U.A0) and f.den.free_of(U.A0):
            return f
        return RationalExpr(f.num.compose({U.A0: repl}), f.den.compose({U.A0: repl}))
    if f.free_of(U.A0):
        return f
    return f.compose({U.A0: repl})


def build_hamiltonian() -> Poly:
    """The degree-4 polynomial Hamiltonian with symbolic parameters."""
    c34 = Q(3, 4) * inv_t
    return (
        Q(1, 4) * inv_t * y**3
        + Q(3, 2) * y**2
        + (3 * alpha3 - 1) * inv_t * x * y
        + c34 * z**2 * w**2
        + Q(3, 2) * z**2 * w
        + (3 * alpha1 + 3 * alpha2 - 2) * Q(1, 2) * inv_t * z * w
        + Q(3, 2) * alpha1 * z
        - 4 * inv_t * p**3
        - 6 * p**2
        - (3 * alpha1 + 3 * alpha2 + 3 * alpha3 - 2) * inv_t * q * p
        - 6 * t * p
        + c34 * alpha1 * (8 * x * p + 2 * z * p + y * z)
        + 6 * inv_t * alpha2 * x * p
        + Q(3, 2) * inv_t * alpha3 * (4 * x * p - y * q)
        + c34
        * (
            8 * x * y * q * p
            - 4 * z * w * q * p
            + 8 * x * z * w * p
            - 8 * x**2 * y * p
            + 2 * z**2 * w * p
            + y * z**2 * w
            - 2 * y * q**2 * p
            + 8 * w**2 * p
            - 4 * y * p**2
            + 4 * y * w**2
            + 4 * y**2 * w
            + 8 * y * w * p
            - 8 * x * p
            + 8 * t * y * w
        )
    )


def poisson_bracket(f, g, pairs=PAIRS):
    """``{f, g}`` for polynomials or rational expressions."""
    total = None
    for u, v in pairs:
        fv, fu = f.deriv(v), f.deriv(u)
        if fv.is_zero and fu.is_zero:
            continue
        gu, gv = g.deriv(u), g.deriv(v)
        term = fv * gu - fu * gv
        total = term if total is None else total + term
    if total is None:
        return f * 0 if isinstance(f, Poly) else RationalExpr(0)
    return total


@dataclass(frozen=True)
class HamiltonianSystem:
    H: Poly
    pairs: tuple = PAIRS
    name: str = "H"

    def __post_init__(self):
        if isinstance(self.H, RationalExpr):
            object.__setattr__(self, "H", self.H.as_poly())

    @property
    def phase_vars(self) -> tuple:
        return tuple(i for pair in self.pairs for i in pair)

    def phase_degree(self) -> int:
        return self.H.degree()

    def vector_field(self) -> "VectorField":
        return equations_of_motion(self)

    def specialize(self, values) -> "HamiltonianSystem":
        return HamiltonianSystem(self.H.specialize(values), self.pairs, self.name)

    def with_parameters(self, alpha) -> "HamiltonianSystem":
        """Specialize alpha1..alpha3 (alpha0 is implied by the sum rule)."""
        return self.specialize(parameter_values(alpha))

    def total_time_derivative(self, g):
        return total_time_derivative(g, self)


@dataclass(frozen=True)
class VectorField:
    components: dict = field(default_factory=dict)  # phase index -> Poly

    def __getitem__(self, v):
        return self.components[U.index(v)]

    def items(self):
        return self.components.items()


def parameter_values(alpha) -> dict:
    """Map a 4-vector (alpha0..alpha3) to variable bindings, checking the sum."""
    a = [to_scalar(v) for v in alpha]
    if len(a) != 4:
        raise ValueError("need four parameters alpha0..alpha3")
    if sum(a) != 1:
        raise ValueError("parameters must satisfy alpha0 + alpha1 + alpha2 + alpha3 = 1")
    return dict(zip(U.ALPHAS, a))


def build_H() -> HamiltonianSystem:
    return HamiltonianSystem(build_hamiltonian())


def equations_of_motion(sys: HamiltonianSystem) -> VectorField:
    comps = {i: Poly() for i in U.PHASE}
    for u, v in sys.pairs:
        comps[u] = eliminate_alpha0(sys.H.deriv(v))
        comps[v] = eliminate_alpha0(-sys.H.deriv(u))
    return VectorField(comps)


def restrict(sys: HamiltonianSystem, zeroed) -> HamiltonianSystem:
    """Set the listed phase variables to zero; pairs touching them drop out."""
    idx = {U.index(v) for v in zeroed}
    if not idx <= set(U.PHASE):
        raise ValueError("only phase variables can be restricted")
    H = sys.H.specialize({i: 0 for i in idx})
    pairs = tuple(pr for pr in sys.pairs if not (set(pr) & idx))
    return HamiltonianSystem(H, pairs, f"{sys.name}|{''.join(sorted(U.name(i) for i in idx))}=0")


def total_time_derivative(g, sys: HamiltonianSystem):
    """``{H, g} + dg/dt`` for a Poly or RationalExpr ``g``."""
    return poisson_bracket(sys.H, g, sys.pairs) + g.deriv(U.T)


def generic_alpha(rng: random.Random, height: int = 12):
    """Random rational parameters summing to one, avoiding small integers."""
    while True:
        a = [Q(rng.randint(-height, height), rng.randint(2, height)) for _ in range(3)]
        a0 = 1 - sum(a)
        vec = [a0] + a
        if all(v.denominator != 1 for v in vec):
            return vec


@dataclass
class FirstIntegralSearch:
    basis: list  # Poly first integrals spanning the solution space
    n_unknowns: int
    n_equations: int
    alpha: list
    t_window: tuple


def first_integral_search(
    sys: HamiltonianSystem,
    phase_degree_bound: int,
    t_exponent_range=(-3, 3),
    alpha=None,
    seed: int = 0,
    phase_vars=None,
    budget: int = 2_000_000,
) -> FirstIntegralSearch:
    """Polynomial first integrals up to a phase-degree bound.

    The ansatz is ``sum c_{m,j} t^j M_m`` over phase monomials ``M_m`` of
    degree <= ``phase_degree_bound`` and ``j`` in the closed t-window; the
    parameters are fixed at ``alpha`` (random generic values if omitted).
    Returns a basis of the exact nullspace of the linear system
    ``{H, g} + dg/dt = 0``.
    """
    if alpha is None:
        alpha = generic_alpha(random.Random(seed))
    H = sys.H.specialize(parameter_values(alpha))
    fixed = HamiltonianSystem(H, sys.pairs, sys.name)
    pv = tuple(phase_vars) if phase_vars is not None else fixed.phase_vars
    lo, hi = t_exponent_range
    columns = []
    for j in range(lo, hi + 1):
        tj = var("t", j)
        for m in monomials(pv, phase_degree_bound):
            columns.append(tj * m)
    rows_by_mono: dict = {}
    for col, g in enumerate(columns):
        dg = total_time_derivative(g, fixed)
        for mono, c in dg.terms.items():
            rows_by_mono.setdefault(mono, {})[col] = c
    size = len(columns) * len(rows_by_mono)
    if size > budget:
        raise BudgetExceeded(f"first-integral system {len(rows_by_mono)}x{len(columns)} exceeds budget")
    null = nullspace(list(rows_by_mono.values()), len(columns))
    basis = []
    for vec in null:
        g = Poly()
        for c, col in zip(vec, columns):
            if c:
                g = g + col.scale(c)
        basis.append(g)
    return FirstIntegralSearch(basis, len(columns), len(rows_by_mono), list(alpha), (lo, hi))
