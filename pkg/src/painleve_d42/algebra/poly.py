"""Sparse multivariate polynomials with exact rational coefficients.

Monomials are packed integers (see ``pack``/``unpack``). Only the time
variable ``t`` may carry a negative exponent, so a :class:`Poly` is an element of ``Q[t, 1/t][x, y, ...]``.
"""
from __future__ import annotations

import heapq
from itertools import combinations_with_replacement

from ..errors import PoleAtPoint, UnsupportedOperation
from . import universe as U
from .scalar import Q, ZERO, gcd_many, is_scalar, lcm_many, scalar_str, to_scalar

# Monomials are packed into one int: 16 bits per variable, slot i holding the
# exponent of variable i. The t slot stores exponent + BIAS so that negative
# powers of t pack without borrowing; every monomial therefore carries the
# biased t slot and the constant monomial is ONE_MONO.
SLOT = 16
MASK = (1 << SLOT) - 1
BIAS = 1 << 14
T_SHIFT = SLOT * U.T
ONE_MONO = BIAS << T_SHIFT
_HIGH_BIT = 1 << (SLOT - 1)
_guard_cache: dict = {}


def _guard(nslots: int) -> int:
    g = _guard_cache.get(nslots)
    if g is None:
        g = 0
        for i in range(nslots):
            g |= _HIGH_BIT << (SLOT * i)
        _guard_cache[nslots] = g
    return g


def pack(exps) -> int:
    """Exponent sequence (index order) -> packed monomial."""
    m = ONE_MONO
    for i, e in enumerate(exps):
        if e:
            if e < 0 and i != U.T:
                raise ValueError(f"negative exponent for {U.name(i)}")
            m += e << (SLOT * i)
    return m


def unpack(m: int) -> tuple:
    """Packed monomial -> exponent tuple with trailing zeros stripped."""
    out = []
    while m:
        out.append(m & MASK)
        m >>= SLOT
    while len(out) <= U.T:
        out.append(0)
    out[U.T] -= BIAS
    n = len(out)
    while n and out[n - 1] == 0:
        n -= 1
    return tuple(out[:n])


def exponent(m: int, i: int) -> int:
    e = (m >> (SLOT * i)) & MASK
    return e - BIAS if i == U.T else e


def mono_mul(a: int, b: int) -> int:
    return a + b - ONE_MONO


def mono_div(a: int, b: int):
    """``a / b`` or None when a non-time exponent would go negative."""
    nslots = max(a.bit_length(), b.bit_length()) // SLOT + 1
    g = _guard(nslots)
    # adding the bias first keeps the (biased) time slot from borrowing
    r = (a | g) + ONE_MONO - b
    if r & g != g:
        return None
    return r - g


def mono_degree(m: int, skip_time=True) -> int:
    d = 0
    i = 0
    while m:
        if i != U.T:
            d += m & MASK
        elif not skip_time:
            d += (m & MASK) - BIAS
        m >>= SLOT
        i += 1
    return d


def order_key(m: int, width: int = 0):
    """Graded lexicographic key; the grading ignores the unit ``t``."""
    e = unpack(m)
    return (mono_degree(m), e + (0,) * (max(width, len(e)) - len(e)))


def var_mono(i: int, power: int = 1) -> int:
    return ONE_MONO + (power << (SLOT * i))


def _nslots(m: int) -> int:
    return (m.bit_length() + SLOT - 1) // SLOT


def _coerce(c):
    return c if isinstance(c, Q) else to_scalar(c)


class Poly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        # trusted constructor: packed monomial keys, no zero coefficients
        self.terms = terms if terms is not None else {}
        self._hash = None

    # ---- construction -------------------------------------------------
    @classmethod
    def from_terms(cls, terms) -> "Poly":
        """Build from ``{exponent tuple: coefficient}``."""
        out = {}
        for exps, c in terms.items():
            m = pack(exps)
            c = _coerce(c)
            if c:
                s = out.get(m, ZERO) + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return cls(out)

    @classmethod
    def const(cls, c) -> "Poly":
        c = _coerce(c)
        return cls({ONE_MONO: c} if c else {})

    @classmethod
    def var(cls, v, power: int = 1) -> "Poly":
        i = U.index(v)
        if power < 0 and i != U.T:
            raise ValueError("only t may carry a negative exponent")
        return cls({var_mono(i, power): Q(1)})

    @classmethod
    def coerce(cls, value) -> "Poly":
        if isinstance(value, Poly):
            return value
        if is_scalar(value):
            return cls.const(value)
        raise TypeError(f"cannot use {type(value).__name__} as a polynomial")

    def exponent_items(self):
        """``(exponent tuple, coefficient)`` pairs in descending term order."""
        return [(unpack(m), c) for m, c in self.sorted_terms()]

    # ---- basic protocol ------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if is_scalar(other):
            return self.terms == ({ONE_MONO: _coerce(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(ONE_MONO, ZERO)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # ---- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            if not is_scalar(other):
                return NotImplemented
            other = Poly.const(other)
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            if not is_scalar(other):
                return NotImplemented
            other = Poly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = -c
            else:
                s = s - c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly(out)

    def __rsub__(self, other):
        if not is_scalar(other):
            return NotImplemented
        return Poly.const(other) - self

    def scale(self, c) -> "Poly":
        c = _coerce(c)
        if not c:
            return Poly()
        if c == 1:
            return self
        return Poly({m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: int, c) -> "Poly":
        if not c:
            return Poly()
        shift = mono - ONE_MONO
        if c == 1:
            return Poly({m + shift: v for m, v in self.terms.items()})
        return Poly({m + shift: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if is_scalar(other):
                return self.scale(other)
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly()
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            return Poly(a).mul_term(mb, cb)
        out: dict = {}
        get = out.get
        a_items = list(a.items())
        for mb, cb in b.items():
            shift = mb - ONE_MONO
            for ma, ca in a_items:
                m = ma + shift
                out[m] = get(m, ZERO) + ca * cb
        return Poly({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise UnsupportedOperation("negative power of a non-monomial polynomial")
            (m, c), = self.terms.items()
            exps = unpack(m)
            if any(e for i, e in enumerate(exps) if i != U.T):
                raise UnsupportedOperation("negative power leaves the Laurent-in-t ring")
            return Poly({var_mono(U.T, -exponent(m, U.T)): 1 / c}) ** (-n)
        if n == 0:
            return Poly.const(1)
        if self.is_monomial():
            (m, c), = self.terms.items()
            return Poly({ONE_MONO + n * (m - ONE_MONO): c**n})
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if is_scalar(other):
            other = _coerce(other)
            if not other:
                raise ZeroDivisionError("division by zero scalar")
            return self.scale(1 / other)
        from .rational import RationalExpr

        return RationalExpr(self, 1) / other

    def __rtruediv__(self, other):
        from .rational import RationalExpr

        return RationalExpr(Poly.coerce(other), self)

    # ---- structure -----------------------------------------------------
    def width(self) -> int:
        """Number of variable slots spanned (an upper bound on the last index + 1)."""
        return max((_nslots(m) for m in self.terms), default=0)

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        w = self.width()
        return sorted(self.terms.items(), key=lambda mc: order_key(mc[0], w), reverse=True)

    def leading_term(self):
        w = self.width()
        return max(self.terms.items(), key=lambda mc: order_key(mc[0], w))

    def variables(self) -> set:
        vs = set()
        for m in self.terms:
            vs.update(i for i, e in enumerate(unpack(m)) if e)
        return vs

    def free_of(self, v) -> bool:
        i = U.index(v)
        return all(not exponent(m, i) for m in self.terms)

    def degree(self, vars=None) -> int:
        """Total degree in ``vars`` (default: phase variables); -1 for zero."""
        idx = U.PHASE if vars is None else tuple(U.index(v) for v in vars)
        if not self.terms:
            return -1
        return max(sum(exponent(m, i) for i in idx) for m in self.terms)

    def min_exp(self, v) -> int:
        i = U.index(v)
        return min(exponent(m, i) for m in self.terms)

    def max_exp(self, v) -> int:
        i = U.index(v)
        return max(exponent(m, i) for m in self.terms)

    def coefficients(self, vars) -> dict:
        """Split into ``{packed monomial in vars: coefficient Poly in the rest}``."""
        idx = [U.index(v) for v in vars]
        out: dict = {}
        for m, c in self.terms.items():
            part = 0
            for i in idx:
                e = exponent(m, i)
                if e:
                    part += e << (SLOT * i)
            out.setdefault(ONE_MONO + part, {})[m - part] = c
        return {k: Poly(v) for k, v in out.items()}

    def coeff(self, mono_poly: "Poly") -> "Poly":
        """Coefficient of the monomial ``mono_poly`` w.r.t. its own variables."""
        (m, c), = mono_poly.terms.items()
        vars_ = [i for i, e in enumerate(unpack(m)) if e]
        return self.coefficients(vars_).get(m, Poly()).scale(1 / c)

    def content(self):
        """Positive rational g with ``self / g`` integral and primitive."""
        if not self.terms:
            return Q(1)
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        return Q(gcd_many(nums), lcm_many(dens))

    # ---- calculus and evaluation --------------------------------------
    def deriv(self, v) -> "Poly":
        i = U.index(v)
        step = 1 << (SLOT * i)
        out = {}
        for m, c in self.terms.items():
            e = exponent(m, i)
            if e:
                out[m - step] = c * e
        return Poly(out)

    def integrate(self, v) -> "Poly":
        """Antiderivative in a non-time variable (no constant added)."""
        i = U.index(v)
        if i == U.T:
            raise UnsupportedOperation("antiderivative in t may leave the Laurent ring")
        step = 1 << (SLOT * i)
        return Poly({m + step: c / (exponent(m, i) + 1) for m, c in self.terms.items()})

    def evaluate(self, point):
        """Exact value at ``point`` (mapping variable -> scalar); all vars bound."""
        vals = {U.index(k): _coerce(v) for k, v in point.items()}
        total = ZERO
        for m, c in self.terms.items():
            term = c
            for i, e in enumerate(unpack(m)):
                if not e:
                    continue
                try:
                    val = vals[i]
                except KeyError:
                    raise KeyError(f"variable {U.name(i)} is unbound") from None
                if e < 0 and not val:
                    raise PoleAtPoint("t = 0 with a negative power of t", U.name(i))
                term = term * val**e
            total += term
        return total

    def specialize(self, values) -> "Poly":
        """Partial evaluation: substitute scalars for some variables."""
        vals = {U.index(k): _coerce(v) for k, v in values.items()}
        out: dict = {}
        for m, c in self.terms.items():
            nm = m
            for i, v in vals.items():
                e = exponent(m, i)
                if e:
                    if e < 0 and not v:
                        raise PoleAtPoint("t = 0 with a negative power of t", U.name(i))
                    c = c * v**e
                    nm -= e << (SLOT * i)
                    if not c:
                        break
            if c:
                s = out.get(nm, ZERO) + c
                if s:
                    out[nm] = s
                else:
                    del out[nm]
        return Poly(out)

    def compose(self, bindings) -> "Poly":
        """Substitute polynomials for variables (no denominators involved)."""
        binds = {U.index(k): Poly.coerce(v) for k, v in bindings.items()}
        if not binds:
            return self
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                if e < 0:
                    cache[key] = binds[i] ** e
                else:
                    prev = cache.get((i, e - 1)) if e > 1 else None
                    cache[key] = prev * binds[i] if prev is not None else binds[i] ** e
            return cache[key]

        acc: dict = {}
        pieces = []
        for m, c in self.terms.items():
            rest = m
            prod = None
            for i in binds:
                e = exponent(m, i)
                if e:
                    rest -= e << (SLOT * i)
                    f = power(i, e)
                    prod = f if prod is None else prod * f
            if prod is None:
                s = acc.get(rest, ZERO) + c
                acc[rest] = s
            else:
                pieces.append(prod.mul_term(rest, c))
        return _sum_polys(pieces + [Poly({k: v for k, v in acc.items() if v})])

    # ---- division ------------------------------------------------------
    def exact_divide(self, den: "Poly"):
        """Quotient ``q`` with ``self == q * den``, or None if not divisible."""
        den = Poly.coerce(den)
        if den.is_zero:
            raise ZeroDivisionError("exact_divide by the zero polynomial")
        if self.is_zero:
            return Poly()
        if den.is_monomial():
            (dm, dc), = den.terms.items()
            out = {}
            inv = 1 / dc
            for m, c in self.terms.items():
                qm = mono_div(m, dm)
                if qm is None:
                    return None
                out[qm] = c * inv
            return Poly(out)
        if len(den) > len(self):
            return None
        lo = self.min_exp(U.T) - den.min_exp(U.T)
        hi = self.max_exp(U.T) - den.max_exp(U.T)
        if lo > hi:
            return None
        width = max(self.width(), den.width(), U.T + 1)
        lt_m, lt_c = den.leading_term()
        den_items = list(den.terms.items())
        keys: dict = {}

        def neg_key(m):
            k = keys.get(m)
            if k is None:
                d, padded = order_key(m, width)
                k = (-d, tuple(-e for e in padded))
                keys[m] = k
            return k

        rem = dict(self.terms)
        heap = [(neg_key(m), m) for m in rem]
        heapq.heapify(heap)
        quot = {}
        while rem:
            _, m = heapq.heappop(heap)
            if m not in rem:
                continue
            qm = mono_div(m, lt_m)
            if qm is None:
                return None
            te = exponent(qm, U.T)
            if not lo <= te <= hi:
                return None
            qc = rem[m] / lt_c
            quot[qm] = qc
            shift = qm - ONE_MONO
            for dm, dc in den_items:
                pm = dm + shift
                v = rem.get(pm)
                if v is None:
                    rem[pm] = -qc * dc
                    heapq.heappush(heap, (neg_key(pm), pm))
                else:
                    v = v - qc * dc
                    if v:
                        rem[pm] = v
                    else:
                        del rem[pm]
        return Poly(quot)

    def reduce_mod(self, divisor: "Poly", solved_var) -> "Poly":
        """Eliminate ``solved_var`` using ``divisor == 0``.

        The divisor must be linear in ``solved_var`` with a nonzero scalar
        coefficient; the result is zero iff ``self`` lies in ``(divisor)``.
        """
        i = U.index(solved_var)
        parts = divisor.coefficients([i])
        lead = parts.get(var_mono(i), Poly())
        if divisor.max_exp(i) != 1 or not lead.is_constant() or lead.is_zero:
            raise UnsupportedOperation(
                f"divisor is not linear in {U.name(i)} with an invertible coefficient"
            )
        lc = lead.constant_value()
        rest = divisor - Poly.var(i).scale(lc)
        return self.compose({i: rest.scale(-1 / lc)})

    # ---- text ----------------------------------------------------------
    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.exponent_items():
            factors = [scalar_str(c)]
            factors += [f"{U.name(i)}^{e}" for i, e in enumerate(exps) if e]
            parts.append("*".join(factors))
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """Inverse of :meth:`to_string`."""
        text = text.strip()
        if text == "0":
            return cls()
        terms: dict = {}
        for chunk in text.split(" + "):
            factors = chunk.strip().split("*")
            c = to_scalar(factors[0])
            m = ONE_MONO
            for f in factors[1:]:
                v, _, e = f.partition("^")
                m += (int(e) if e else 1) << (SLOT * U.index(v))
            terms[m] = terms.get(m, ZERO) + c
        return cls({m: c for m, c in terms.items() if c})

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Poly({self.to_string()!r})"


def _sum_polys(polys) -> Poly:
    out: dict = {}
    get = out.get
    for p in polys:
        for m, c in p.terms.items():
            out[m] = get(m, ZERO) + c
    return Poly({m: c for m, c in out.items() if c})


def sum_polys(polys) -> Poly:
    return _sum_polys(polys)


def var(v, power: int = 1) -> Poly:
    return Poly.var(v, power)


def const(c) -> Poly:
    return Poly.const(c)


def monomials(vars, max_degree: int):
    """All monomials of total degree <= max_degree in ``vars`` (as Poly)."""
    idx = [U.index(v) for v in vars]
    out = []
    for d in range(max_degree + 1):
        for combo in combinations_with_replacement(idx, d):
            m = ONE_MONO
            for i in combo:
                m += 1 << (SLOT * i)
            out.append(Poly({m: Q(1)}))
    return out
