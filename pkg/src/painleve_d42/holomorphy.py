"""Polynomiality of the Hamiltonian in the four blow-up charts r0..r3.

A chart is stored twice: the forward images (chart coordinates as rational
functions of x..p) and the inverse images used for rewriting. Chart
coordinates reuse the x..p slots, so ``z`` in an inverse image means ``z_i``.
Dependence on t and the parameters is unrestricted; only negative powers of
the chart's singular coordinate disqualify an expression.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import universe as U
from .algebra.linalg import in_span, mat_vec, solve_affine
from .algebra.poly import Poly, SLOT, exponent, monomials, unpack, var_mono
from .algebra.rational import RationalExpr, substitute
from .algebra.scalar import Q, to_scalar
from .hamiltonian import (
    HamiltonianSystem,
    alpha0,
    alpha1,
    alpha2,
    alpha3,
    build_hamiltonian,
    eliminate_alpha0,
    generic_alpha,
    p,
    parameter_values,
    q,
    t,
    total_time_derivative,
    w,
    x,
    y,
    z,
)


def _r(v) -> RationalExpr:
    return RationalExpr.coerce(v)


@dataclass(frozen=True)
class Chart:
    index: int
    forward: dict = field(compare=False)  # phase index -> RationalExpr in x..p
    inverse: dict = field(compare=False)  # phase index -> RationalExpr in chart coordinates
    singular: int = U.X
    subtract_z: bool = False

    def adjusted(self, K):
        """The function required to be polynomial in this chart."""
        return K - z if self.subtract_z else K

    def to_chart(self, f) -> RationalExpr:
        return eliminate_alpha0(substitute(f, self.inverse))

    def from_chart(self, f) -> RationalExpr:
        return eliminate_alpha0(substitute(f, self.forward))

    def round_trip(self) -> bool:
        """forward(inverse) and inverse(forward) are both the identity."""
        for i in U.PHASE:
            v = Poly.var(i)
            if self.to_chart(self.forward[i]) != v:
                return False
            if self.from_chart(self.inverse[i]) != v:
                return False
        return True


def _identity(exclude=()):
    return {i: _r(Poly.var(i)) for i in U.PHASE if i not in exclude}


def _chart0() -> Chart:
    fwd = _identity((U.X, U.Y, U.W))
    fwd[U.X] = 1 / _r(x)
    fwd[U.Y] = _r(-((y + z**2 / 4) * x + alpha0) * x)
    fwd[U.W] = _r(w + x * z / 2)
    inv = _identity((U.X, U.Y, U.W))
    inv[U.X] = 1 / _r(x)
    inv[U.Y] = _r(-y * x**2 - alpha0 * x - z**2 / 4)
    inv[U.W] = _r(w) - _r(z) / (2 * _r(x))
    return Chart(0, fwd, inv, U.X, False)


def _chart1() -> Chart:
    fwd = _identity((U.Z, U.W))
    fwd[U.Z] = 1 / _r(z)
    fwd[U.W] = _r(-(w * z + alpha1) * z)
    inv = dict(fwd)  # r1 is an involution on (z, w)
    return Chart(1, fwd, inv, U.Z, False)


def _chart2() -> Chart:
    fwd = _identity((U.X, U.Y, U.Z, U.W, U.QV, U.P))
    fwd[U.X] = _r(x - z / 2)
    fwd[U.Y] = _r(y + z**2 / 4)
    fwd[U.Z] = 1 / _r(z)
    fwd[U.W] = _r(-((w + y / 2 + p + t + x * z / 2 - z * q / 4) * z + alpha2) * z)
    fwd[U.QV] = _r(q - z)
    fwd[U.P] = _r(p - z**2 / 8)
    zi = 1 / _r(z)
    inv = {
        U.X: _r(x) + zi / 2,
        U.Y: _r(y) - zi**2 / 4,
        U.Z: zi,
        U.QV: _r(q) + zi,
        U.P: _r(p) + zi**2 / 8,
    }
    f2val = _r(-(w * z + alpha2) * z)
    inv[U.W] = f2val - inv[U.P] - inv[U.Y] / 2 - inv[U.X] * zi / 2 + zi * inv[U.QV] / 4 - t
    return Chart(2, fwd, inv, U.Z, True)


def _chart3() -> Chart:
    fwd = _identity((U.QV, U.P))
    fwd[U.QV] = 1 / _r(q)
    fwd[U.P] = _r(-(p * q + alpha3) * q)
    return Chart(3, fwd, dict(fwd), U.QV, False)


_BUILDERS = (_chart0, _chart1, _chart2, _chart3)


@lru_cache(maxsize=None)
def chart(i: int) -> Chart:
    if i not in (0, 1, 2, 3):
        raise ValueError("chart index must be 0..3")
    return _BUILDERS[i]()


@dataclass
class HolomorphyReport:
    ok: bool
    chart: int
    # negative power k of the singular coordinate -> its coefficient
    offending: dict
    expression: RationalExpr

    def describe(self) -> str:
        if self.ok:
            return "polynomial"
        s = U.name(chart(self.chart).singular)
        return "; ".join(f"{s}^{k}: {c}" for k, c in sorted(self.offending.items()))


def negative_part(expr: RationalExpr, s: int):
    """Split off the terms with negative powers of variable ``s``.

    Returns ``{k: coefficient}`` for ``k < 0``, or ``None`` when the
    denominator is not a pure power of ``s`` (never the case for these charts).
    """
    den = expr.den
    if len(den) != 1:
        return None
    (m, c), = den.terms.items()
    k = exponent(m, s)
    if m != var_mono(s, k):
        return None
    out: dict = {}
    step = SLOT * s
    for mn, cn in expr.num.terms.items():
        e = exponent(mn, s)
        if e < k:
            rest = mn - (e << step)
            key = e - k
            out[key] = out.get(key, Poly()) + Poly({rest: cn / c})
    return {k_: v for k_, v in out.items() if not v.is_zero}


def check_holomorphy(K, i: int, adjust: bool = True) -> HolomorphyReport:
    """Whether ``K`` (or ``K - z`` in chart 2) is polynomial in chart ``i``."""
    ch = chart(i)
    f = ch.adjusted(K) if adjust else K
    expr = ch.to_chart(f)
    neg = negative_part(expr, ch.singular)
    if neg is None:
        return HolomorphyReport(False, i, {0: expr.den}, expr)
    return HolomorphyReport(not neg, i, neg, expr)


# ---- the family H + sum a_k (y + 2p)^k ---------------------------------------
DIRECTION = y + 2 * p


def ansatz_family(coeffs=None) -> Poly:
    """``H + sum a_k (y+2p)^k``; symbolic unknowns ``a1..a4`` by default."""
    if coeffs is None:
        coeffs = [Poly.var(U.unknown(k)) for k in range(1, 5)]
    K = build_hamiltonian()
    for k, a in enumerate(coeffs, start=1):
        K = K + Poly.coerce(a) * DIRECTION**k
    return K


def direction_is_not_integral(K=None) -> Poly:
    """Total derivative of ``y + 2p`` along the flow of ``K`` (nonzero)."""
    K = ansatz_family() if K is None else K
    return eliminate_alpha0(total_time_derivative(DIRECTION, HamiltonianSystem(K)))


@dataclass
class AnsatzSolution:
    t0: object
    alpha: list
    columns: list  # packed phase monomials, one per unknown
    n_equations: int
    particular: list
    null: list
    contains_H: bool
    contains_directions: dict  # k -> bool
    contains_constant: bool

    @property
    def dimension(self) -> int:
        return len(self.null)

    @property
    def family_contained(self) -> bool:
        return self.contains_H and all(self.contains_directions.values())

    def vector(self, K: Poly) -> list:
        return _as_vector(K, self.columns)


def _as_vector(K: Poly, columns) -> list:
    pos = {m: j for j, m in enumerate(columns)}
    v = [Q(0)] * len(columns)
    for m, c in K.terms.items():
        j = pos.get(m)
        if j is None:
            raise ValueError(f"{K} is outside the degree-4 ansatz")
        v[j] = c
    return v


def _chart_constraints(ch: Chart, columns, values):
    """Rows {col: coeff} and right-hand sides for chart ``ch`` at fixed (t0, alpha)."""
    inv = {v: eliminate_alpha0(r).specialize(values) for v, r in ch.inverse.items()}
    cache: dict = {(0,) * 6: RationalExpr(1)}

    def image(e):
        r = cache.get(e)
        if r is None:
            j = max(k for k in range(6) if e[k])
            lower = e[:j] + (e[j] - 1,) + e[j + 1 :]
            r = cache[e] = image(lower) * inv[U.PHASE[j]]
        return r

    rows: dict = {}
    for col, m in enumerate(columns):
        e = (tuple(unpack(m)) + (0,) * 6)[:6]
        neg = negative_part(image(e), ch.singular)
        for k, coef in neg.items():
            for mono, c in coef.terms.items():
                rows.setdefault((k, mono), {})[col] = c
    rhs: dict = {}
    if ch.subtract_z:
        neg = negative_part(image((0, 0, 1, 0, 0, 0)), ch.singular)
        for k, coef in neg.items():
            for mono, c in coef.terms.items():
                rhs[(k, mono)] = c
                rows.setdefault((k, mono), {})
    keys = sorted(rows)
    return [rows[k] for k in keys], [rhs.get(k, Q(0)) for k in keys]


def ansatz_solve(t0=None, alpha=None, seed: int = 0) -> AnsatzSolution:
    """Degree-4 polynomials satisfying the four chart conditions at fixed (t0, alpha).

    Unspecified ``t0``/``alpha`` are drawn from ``seed``.
    """
    rng = random.Random(f"ansatz:{seed}")
    if alpha is None:
        alpha = generic_alpha(rng)
    if t0 is None:
        t0 = Q(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
    t0 = to_scalar(t0)
    if not t0:
        raise ValueError("t0 must be nonzero")
    values = parameter_values(alpha)
    values[U.T] = t0
    columns = [next(iter(mono.terms)) for mono in monomials(U.PHASE, 4)]
    rows, rhs = [], []
    for i in range(4):
        r, b = _chart_constraints(chart(i), columns, values)
        rows += r
        rhs += b
    particular, null = solve_affine(rows, rhs, len(columns))

    H0 = build_hamiltonian().specialize(values)
    vH = _as_vector(H0, columns)
    contains_H = mat_vec(rows, vH) == [Q(b) for b in rhs]
    dirs = {}
    for k in range(1, 5):
        dirs[k] = in_span(null, _as_vector(DIRECTION**k, columns))
    contains_const = in_span(null, _as_vector(Poly.const(1), columns))
    return AnsatzSolution(t0, [to_scalar(a) for a in alpha], columns, len(rows), particular, null, contains_H, dirs, contains_const)
