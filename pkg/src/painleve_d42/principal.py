"""The two-dimensional principal parts K1, K2, K3 of the Hamiltonian.

K1 and K3 are linear in one variable and solve by variation of constants.
Their solutions are finite sums ``sum c * t**e`` with parameter-dependent
exponents, which :class:`ExpSum` represents exactly. K2 is handled by a
time-dependent symplectic rescaling after which ``4 t K2~`` is conserved.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import universe as U
from .algebra.poly import Poly, exponent, SLOT
from .algebra.rational import RationalExpr
from .algebra.scalar import Q, to_scalar
from .errors import DegenerateParameters, PoleAtPoint
from .hamiltonian import (
    HamiltonianSystem,
    alpha0,
    alpha1,
    alpha2,
    alpha3,
    build_H,
    eliminate_alpha0,
    poisson_bracket,
    restrict,
    t,
    total_time_derivative,
    w,
    z,
)

C1 = Poly.var(U.C1)
C2 = Poly.var(U.C2)


def _norm_exponent(e) -> Poly:
    e = eliminate_alpha0(Poly.coerce(e))
    if e.degree(U.ALPHAS) > 1 or not e.variables() <= set(U.ALPHAS):
        raise ValueError(f"exponent {e} is not affine in the parameters")
    return e


def _norm_coeff(c) -> RationalExpr:
    return eliminate_alpha0(RationalExpr.coerce(c))


class ExpSum:
    """Finite sum of ``c * t**e``: c rational in (alpha, C1, C2), e affine in alpha.

    Exponents are compared after alpha0-elimination, so two exponents that
    only agree modulo the sum rule are merged.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for e, c in items:
                e = _norm_exponent(e)
                c = _norm_coeff(c)
                prev = acc.get(e)
                acc[e] = c if prev is None else prev + c
        self.terms = {e: c for e, c in acc.items() if not c.is_zero}

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = {e: c for e, c in terms.items() if not c.is_zero}
        return obj

    @classmethod
    def const(cls, c) -> "ExpSum":
        return cls({Poly(): c})

    @classmethod
    def monomial(cls, c, e) -> "ExpSum":
        return cls({e: c})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ExpSum):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def coefficient(self, e) -> RationalExpr:
        return self.terms.get(_norm_exponent(e), RationalExpr(0))

    def exponents(self) -> list:
        return list(self.terms)

    # ---- ring operations --------------------------------------------------
    def __add__(self, other):
        other = _as_expsum(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            prev = out.get(e)
            out[e] = c if prev is None else prev + c
        return ExpSum._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpSum._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_expsum(other))

    def __rsub__(self, other):
        return _as_expsum(other) - self

    def __mul__(self, other):
        other = _as_expsum(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                c = c1 * c2
                prev = out.get(e)
                out[e] = c if prev is None else prev + c
        return ExpSum._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ZeroDivisionError("only single-term sums can be inverted")
            (e, c), = self.terms.items()
            return ExpSum._raw({-e: c.inverse()}) ** (-n)
        out = ExpSum.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def deriv(self) -> "ExpSum":
        """d/dt, mapping ``(c, e)`` to ``(c * e, e - 1)``."""
        return ExpSum._raw({e - 1: c * e for e, c in self.terms.items()})

    # ---- specialization and evaluation ------------------------------------
    def specialize(self, values) -> "ExpSum":
        """Fix some of alpha0..alpha3, C1, C2 to scalars.

        ``alpha0`` is redundant after elimination; if supplied it must agree
        with the sum rule.
        """
        vals = {U.index(k): to_scalar(v) for k, v in values.items()}
        if U.A0 in vals:
            rest = [vals.get(a) for a in U.ALPHAS[1:]]
            if None not in rest and vals[U.A0] + sum(rest) != 1:
                raise ValueError("alpha0 + alpha1 + alpha2 + alpha3 must equal 1")
            del vals[U.A0]
        out: dict = {}
        for e, c in self.terms.items():
            try:
                c2 = c.specialize(vals)
            except PoleAtPoint as exc:
                raise DegenerateParameters(f"coefficient {c} is singular at these parameters") from exc
            e2 = e.specialize(vals)
            prev = out.get(e2)
            out[e2] = c2 if prev is None else prev + c2
        return ExpSum._raw(out)

    def evaluate(self, tval, values) -> float:
        """Floating-point value at time ``tval`` (all symbols in ``values``)."""
        vals = {U.index(k): to_scalar(v) for k, v in values.items()}
        vals.pop(U.A0, None)
        total = 0.0
        for e, c in self.terms.items():
            try:
                cv = c.evaluate(vals)
            except PoleAtPoint as exc:
                raise DegenerateParameters(f"coefficient {c} is singular at these parameters") from exc
            ev = e.evaluate(vals)
            total += float(cv) * float(tval) ** float(ev)
        return total

    @classmethod
    def from_poly(cls, poly: Poly, bindings) -> "ExpSum":
        """Substitute ExpSums for some variables (``t`` may appear to negative powers)."""
        binds = {U.index(k): _as_expsum(v) for k, v in bindings.items()}
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            r = cache.get(key)
            if r is None:
                r = cache[key] = binds[i] ** k
            return r

        total = ExpSum()
        for m, c in poly.terms.items():
            rest = m
            term = None
            for i in binds:
                k = exponent(m, i)
                if not k:
                    continue
                rest -= k << (SLOT * i)
                f = power(i, k)
                term = f if term is None else term * f
            coeff = Poly({rest: c})
            total = total + (ExpSum.const(coeff) if term is None else term * ExpSum.const(coeff))
        return total

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"({c}) * t^({e})" for e, c in sorted(self.terms.items(), key=lambda kv: kv[0].to_string())]
        return " + ".join(parts)

    __str__ = to_string

    def __repr__(self):
        return f"ExpSum({self.to_string()!r})"


def _as_expsum(v) -> ExpSum:
    if isinstance(v, ExpSum):
        return v
    return ExpSum.const(v)


T_ES = ExpSum.monomial(1, 1)


# ---- subsystems --------------------------------------------------------------
def k1_system(H: HamiltonianSystem | None = None) -> HamiltonianSystem:
    return restrict(H or build_H(), ["z", "w", "q", "p"])


def k2_system(H: HamiltonianSystem | None = None) -> HamiltonianSystem:
    return restrict(H or build_H(), ["x", "y", "q", "p"])


def k3_system(H: HamiltonianSystem | None = None) -> HamiltonianSystem:
    return restrict(H or build_H(), ["x", "y", "z", "w"])


def k1_expected() -> Poly:
    inv_t = t ** -1
    return Q(1, 4) * inv_t * Poly.var("y", 3) + Q(3, 2) * Poly.var("y", 2) + (3 * alpha3 - 1) * inv_t * Poly.var("x") * Poly.var("y")


def k2_expected() -> Poly:
    inv_t = t ** -1
    return (
        Q(3, 4) * inv_t * z**2 * w**2
        + Q(3, 2) * z**2 * w
        + Q(1, 2) * (3 * alpha1 + 3 * alpha2 - 2) * inv_t * z * w
        + Q(3, 2) * alpha1 * z
    )


def k3_expected() -> Poly:
    inv_t = t ** -1
    qv, pv = Poly.var("q"), Poly.var("p")
    return (
        -4 * inv_t * pv**3
        - 6 * pv**2
        - (3 * alpha1 + 3 * alpha2 + 3 * alpha3 - 2) * inv_t * qv * pv
        - 6 * t * pv
    )


# ---- closed forms ------------------------------------------------------------
def k1_solution():
    """General solution ``(x(t), y(t))`` of the K1 flow for generic parameters."""
    s = alpha0 + alpha1 + alpha2
    x_sol = ExpSum(
        [
            (-1 + 3 * s, RationalExpr(C1, s - alpha3)),
            (-4 + 6 * s, RationalExpr(C1**2, 4 * (s - 2 * alpha3))),
            (2 - 3 * s, C2),
        ]
    )
    y_sol = ExpSum.monomial(C1, s - 2 * alpha3)
    return x_sol, y_sol


def k3_solution():
    """General solution ``(q(t), p(t))`` of the K3 flow for generic parameters."""
    r = alpha1 + alpha2 + alpha3
    q_sol = ExpSum(
        [
            (2, RationalExpr(-2, r)),
            (2 - 3 * alpha0, RationalExpr(-4 * C1, r - alpha0)),
            (2 - 6 * alpha0, RationalExpr(-4 * C1**2, r - 2 * alpha0)),
            (-1 + 3 * alpha0, C2),
        ]
    )
    p_sol = ExpSum.monomial(C1, -(2 * alpha0 - r))
    return q_sol, p_sol


@dataclass
class ClosedFormCheck:
    ok: bool
    residuals: dict  # variable name -> ExpSum


def verify_closed_form(solution, subsystem: HamiltonianSystem, alpha=None) -> ClosedFormCheck:
    """Substitute a closed-form solution into a one-pair subsystem's flow.

    The residual ``u' - dK/dv`` and ``v' + dK/du`` is computed symbolically as
    an ExpSum; with ``alpha`` given the parameters are fixed first, which
    raises :class:`DegenerateParameters` on a resonance.
    """
    if len(subsystem.pairs) != 1:
        raise ValueError("closed forms are checked on single-pair subsystems")
    (u, v), = subsystem.pairs
    su, sv = solution
    K = subsystem.H
    if alpha is not None:
        vals = dict(zip(U.ALPHAS, (to_scalar(a) for a in alpha)))
        if sum(vals.values()) != 1:
            raise ValueError("alpha0 + alpha1 + alpha2 + alpha3 must equal 1")
        su, sv = su.specialize(vals), sv.specialize(vals)
        K = eliminate_alpha0(K).specialize({a: vals[a] for a in U.ALPHAS[1:]})
    binds = {u: su, v: sv, U.T: T_ES}
    rhs_u = ExpSum.from_poly(eliminate_alpha0(K.deriv(v)), binds)
    rhs_v = ExpSum.from_poly(eliminate_alpha0(-K.deriv(u)), binds)
    res = {U.name(u): su.deriv() - rhs_u, U.name(v): sv.deriv() - rhs_v}
    return ClosedFormCheck(all(r.is_zero for r in res.values()), res)


# ---- K2 ----------------------------------------------------------------------
# New coordinates reuse the z, w slots: z1 = t z, w1 = w / t.
Z1_OF_OLD = t * z
W1_OF_OLD = w * t ** -1
OLD_OF_NEW = {U.Z: z * t ** -1, U.W: t * w}


def k2_tilde_expected() -> Poly:
    """Transformed K2 with the parenthesis closed after ``2 alpha1``."""
    return Q(3, 4) * t ** -1 * z * (z * w**2 + 2 * z * w + 2 * (alpha1 + alpha2) * w + 2 * alpha1)


@dataclass
class K2TransformReport:
    transformed: Poly
    correction: Poly
    expected: Poly
    matches: bool
    symplectic: bool
    note: str = "displayed formula has an unbalanced parenthesis; closed after 2*alpha1"

    def __iter__(self):
        yield self.transformed
        yield self.matches and self.symplectic


def k2_transform() -> K2TransformReport:
    """Rewrite the K2 flow in ``z1 = t z``, ``w1 = w / t``.

    The correction ``R`` satisfies ``dR/dw1 = (dz1/dt)|_(z,w)`` and
    ``-dR/dz1 = (dw1/dt)|_(z,w)``, both expressed in the new variables.
    """
    K2 = k2_system().H
    dz1 = Z1_OF_OLD.deriv(U.T).compose(OLD_OF_NEW)
    dw1 = W1_OF_OLD.deriv(U.T).compose(OLD_OF_NEW)
    R = dz1.integrate(U.W)
    if -R.deriv(U.Z) != dw1:
        raise ArithmeticError("time dependence of the change is not Hamiltonian")
    transformed = eliminate_alpha0(K2.compose(OLD_OF_NEW) + R)
    expected = k2_tilde_expected()
    symplectic = poisson_bracket(W1_OF_OLD, Z1_OF_OLD) == 1
    return K2TransformReport(transformed, R, expected, transformed == expected, symplectic)


def k2_tilde_system() -> HamiltonianSystem:
    return HamiltonianSystem(k2_tilde_expected(), ((U.Z, U.W),), "K2~")


def first_integral_I() -> Poly:
    return 4 * t * k2_tilde_expected()


def integral_defect(g, sys: HamiltonianSystem) -> Poly:
    """``{K, g} + dg/dt`` with alpha0 eliminated; zero for a first integral."""
    return eliminate_alpha0(total_time_derivative(g, sys))


def first_integral_I_check() -> bool:
    return integral_defect(first_integral_I(), k2_tilde_system()).is_zero


def is_resonant(alpha) -> bool:
    """Whether a closed-form denominator of K1 or K3 vanishes at ``alpha``."""
    vals = dict(zip(U.ALPHAS, (to_scalar(a) for a in alpha)))
    try:
        for sol in (k1_solution(), k3_solution()):
            for s in sol:
                s.specialize(vals)
    except DegenerateParameters:
        return True
    return False


def nonresonant_alpha(rng, height: int = 6):
    """Generic parameters (sum 1, no integers) away from every resonance."""
    from .hamiltonian import generic_alpha

    while True:
        a = generic_alpha(rng, height)
        if not is_resonant(a):
            return a
