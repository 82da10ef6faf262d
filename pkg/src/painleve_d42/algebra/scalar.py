"""Exact rational scalars.

gmpy2's ``mpq`` is used when importable; otherwise ``fractions.Fraction``.
Setting ``PD42_PURE_PYTHON=1`` forces the pure-Python fallback (used by the
benchmarks and by the backend-equivalence tests).
"""
from __future__ import annotations

import math
import os
from fractions import Fraction
from numbers import Rational

_FORCE_PURE = os.environ.get("PD42_PURE_PYTHON", "") not in ("", "0")

Q: type
if not _FORCE_PURE:
    try:
        from gmpy2 import mpq as Q  # type: ignore[no-redef]

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - depends on environment
        Q = Fraction
        BACKEND = "fractions"
else:
    Q = Fraction
    BACKEND = "fractions"

ZERO = Q(0)
ONE = Q(1)


def to_scalar(value) -> "Q":
    """Convert ints, rationals, floats, and strings ("3/4", "0.25") exactly."""
    if isinstance(value, Q):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return Q(value)
    if isinstance(value, str):
        f = Fraction(value.strip())
        return Q(f.numerator, f.denominator)
    if isinstance(value, (Rational, float)) or hasattr(value, "numerator"):
        f = Fraction(value)
        return Q(f.numerator, f.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")


def is_scalar(value) -> bool:
    return isinstance(value, (int, Q, Fraction)) and not isinstance(value, bool)


def scalar_str(c) -> str:
    """Canonical "num/den" text (just "num" for integers)."""
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def gcd_many(values) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, int(v))
        if g == 1:
            break
    return g


def lcm_many(values) -> int:
    m = 1
    for v in values:
        v = int(v)
        m = m // math.gcd(m, v) * v
    return m
