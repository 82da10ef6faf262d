"""Quotients of polynomials and simultaneous substitution.

There is no multivariate GCD. Normalization cancels common monomial factors
and scalar content only; further cancellation happens through
:meth:`RationalExpr.cancel` with an explicit list of candidate factors.
Equality is decided by cross-multiplication, so it never depends on how far
a value has been reduced.
"""
from __future__ import annotations

from collections import Counter

from ..errors import PoleAtPoint
from . import universe as U
from .poly import ONE_MONO, SLOT, Poly, exponent, sum_polys
from .scalar import Q, is_scalar

_T_SLOT_MASK = ((1 << SLOT) - 1) << (SLOT * U.T)
_NON_T_MASK = ~_T_SLOT_MASK


def _monomial_gcd_shift(num: Poly, den: Poly) -> int:
    """Packed monomial ``g`` such that num/g and den/g share no monomial factor.

    For ``t`` the shift only normalizes the denominator's lowest power to 0.
    """
    shift = ONE_MONO
    te = den.min_exp(U.T)
    if te:
        shift += te << (SLOT * U.T)
    # a term free of every non-time variable rules out any other common factor
    for m in den.terms:
        if not m & _NON_T_MASK:
            return shift
    for m in num.terms:
        if not m & _NON_T_MASK:
            return shift
    width = max(num.width(), den.width())
    for i in range(width):
        if i == U.T:
            continue
        e = min(num.min_exp(i), den.min_exp(i))
        if e:
            shift += e << (SLOT * i)
    return shift


def _divide_monomial(p: Poly, m: int) -> Poly:
    if m == ONE_MONO:
        return p
    d = m - ONE_MONO
    return Poly({k - d: c for k, c in p.terms.items()})


class RationalExpr:
    __slots__ = ("num", "den")
    __hash__ = None  # equality is not structural

    def __init__(self, num, den=1, *, normalize=True):
        num = Poly.coerce(num)
        den = Poly.coerce(den)
        if den.is_zero:
            raise ZeroDivisionError("denominator is the zero polynomial")
        if normalize:
            num, den = self._normalize(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _normalize(num: Poly, den: Poly):
        if num.is_zero:
            return num, Poly.const(1)
        shift = _monomial_gcd_shift(num, den)
        if shift != ONE_MONO:
            num = _divide_monomial(num, shift)
            den = _divide_monomial(den, shift)
        if den.is_constant():
            c = den.constant_value()
            return (num if c == 1 else num.scale(1 / c)), Poly.const(1)
        g = den.content()
        if den.leading_term()[1] < 0:
            g = -g
        if g != 1:
            inv = 1 / g
            num = num.scale(inv)
            den = den.scale(inv)
        return num, den

    @classmethod
    def coerce(cls, value) -> "RationalExpr":
        if isinstance(value, RationalExpr):
            return value
        return cls(Poly.coerce(value) if not isinstance(value, Poly) else value)

    # ---- predicates ------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_polynomial(self) -> bool:
        """True when the denominator is a scalar times a power of ``t``."""
        return self.den == 1

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("expression has a non-trivial denominator")
        return self.num

    def __eq__(self, other):
        if isinstance(other, (Poly, int, Q)) or is_scalar(other):
            other = RationalExpr.coerce(other)
        if not isinstance(other, RationalExpr):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def __bool__(self):
        return not self.is_zero

    # ---- arithmetic ------------------------------------------------------
    def __add__(self, other):
        try:
            other = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return RationalExpr(a + c, b)
        if d == 1:
            return RationalExpr(a + c * b, b)
        if b == 1:
            return RationalExpr(a * d + c, d)
        k = d.exact_divide(b)
        if k is not None:
            return RationalExpr(a * k + c, d)
        k = b.exact_divide(d)
        if k is not None:
            return RationalExpr(a + c * k, b)
        return RationalExpr(a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        try:
            other = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RationalExpr.coerce(other) - self

    def __mul__(self, other):
        try:
            other = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        # cheap cross-cancellation when a denominator divides the other numerator
        if d != 1:
            k = a.exact_divide(d) if len(d) <= len(a) else None
            if k is not None:
                a, d = k, Poly.const(1)
        if b != 1:
            k = c.exact_divide(b) if len(b) <= len(c) else None
            if k is not None:
                c, b = k, Poly.const(1)
        return RationalExpr(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RationalExpr":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return RationalExpr(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RationalExpr.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RationalExpr(self.num**n, self.den**n, normalize=False)

    # ---- reduction -------------------------------------------------------
    def cancel(self, factors) -> "RationalExpr":
        """Divide out every listed factor as often as it divides both parts."""
        num, den = self.num, self.den
        changed = False
        for f in factors:
            f = Poly.coerce(f)
            if f.is_constant():
                continue
            while True:
                qd = den.exact_divide(f)
                if qd is None:
                    break
                qn = num.exact_divide(f)
                if qn is None:
                    break
                num, den, changed = qn, qd, True
        return RationalExpr(num, den) if changed else self

    # ---- calculus / evaluation ----------------------------------------
    def deriv(self, v) -> "RationalExpr":
        if self.den == 1:
            return RationalExpr(self.num.deriv(v), 1, normalize=False)
        dd = self.den.deriv(v)
        if dd.is_zero:
            return RationalExpr(self.num.deriv(v), self.den)
        return RationalExpr(self.num.deriv(v) * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if not d:
            raise PoleAtPoint(f"denominator {self.den} vanishes", self.den)
        return self.num.evaluate(point) / d

    def specialize(self, values) -> "RationalExpr":
        den = self.den.specialize(values)
        if den.is_zero:
            raise PoleAtPoint(f"denominator {self.den} vanishes identically", self.den)
        return RationalExpr(self.num.specialize(values), den)

    def subs(self, bindings) -> "RationalExpr":
        return substitute(self, bindings)

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    def size(self) -> int:
        return len(self.num) + len(self.den)

    def to_string(self) -> str:
        if self.den == 1:
            return self.num.to_string()
        return f"({self.num.to_string()}) / ({self.den.to_string()})"

    __str__ = to_string

    def __repr__(self):
        return f"RationalExpr({self.to_string()!r})"


def as_rational(value) -> RationalExpr:
    return RationalExpr.coerce(value)


def _grouped_substitute(poly: Poly, binds, cache):
    """Return (numerator, Counter{denominator Poly: power}) for poly under binds."""
    per_term = []
    for m, c in poly.terms.items():
        rest = m
        facs = []
        groups: Counter = Counter()
        for i, (n, d) in binds.items():
            e = exponent(m, i)
            if not e:
                continue
            rest -= e << (SLOT * i)
            if e > 0:
                top, bottom, k = n, d, e
            else:
                if n.is_zero:
                    raise PoleAtPoint(f"{U.name(i)} is bound to zero but occurs with a negative power")
                top, bottom, k = d, n, -e
            facs.append((top, k))
            if bottom != 1:
                groups[bottom] += k
        per_term.append((c, rest, facs, groups))

    maxk: Counter = Counter()
    for _, _, _, groups in per_term:
        for g, k in groups.items():
            if k > maxk[g]:
                maxk[g] = k

    def power(p, k):
        key = (p, k)
        r = cache.get(key)
        if r is None:
            prev = cache.get((p, k - 1)) if k > 1 else None
            r = prev * p if prev is not None else p**k
            cache[key] = r
        return r

    pieces = []
    plain: dict = {}
    for c, rest, facs, groups in per_term:
        prod = None
        for p, k in facs:
            f = power(p, k)
            prod = f if prod is None else prod * f
        for g, k in maxk.items():
            extra = k - groups.get(g, 0)
            if extra:
                f = power(g, extra)
                prod = f if prod is None else prod * f
        if prod is None:
            plain[rest] = plain.get(rest, 0) + c
        else:
            pieces.append(prod.mul_term(rest, c))
    pieces.append(Poly({m: c for m, c in plain.items() if c}))
    return sum_polys(pieces), maxk


def substitute(f, bindings) -> RationalExpr:
    """Simultaneously replace variables by rational expressions."""
    binds = {}
    for k, v in bindings.items():
        r = RationalExpr.coerce(v)
        binds[U.index(k)] = (r.num, r.den)
    if isinstance(f, RationalExpr):
        num, den = f.num, f.den
    else:
        num, den = Poly.coerce(f), Poly.const(1)
    if not binds:
        return RationalExpr(num, den)
    cache: dict = {}
    n1, g1 = _grouped_substitute(num, binds, cache)
    if den == 1:
        n2, g2 = Poly.const(1), Counter()
    else:
        n2, g2 = _grouped_substitute(den, binds, cache)
        if n2.is_zero:
            raise ZeroDivisionError("substitution makes the denominator vanish identically")
    # (n1 / prod g1) / (n2 / prod g2) = n1 * prod g2 / (n2 * prod g1)
    top, bottom = n1, n2
    for g in set(g1) | set(g2):
        k = g2.get(g, 0) - g1.get(g, 0)
        if k > 0:
            top = top * g**k
        elif k < 0:
            bottom = bottom * g ** (-k)
    return RationalExpr(top, bottom)


def partial_derive(f, v):
    """Formal partial derivative of a Poly or RationalExpr."""
    return f.deriv(v)


def evaluate(f, point):
    return f.evaluate(point)
