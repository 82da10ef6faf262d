"""Independent sympy transcriptions used as oracles by the tests."""
import sympy as sp

from painleve_d42.algebra import universe as U

x, y, z, w, q, p, t, a0, a1, a2, a3, C1, C2 = sp.symbols("x y z w q p t alpha0 alpha1 alpha2 alpha3 C1 C2")
SYMS = {"x": x, "y": y, "z": z, "w": w, "q": q, "p": p, "t": t,
        "alpha0": a0, "alpha1": a1, "alpha2": a2, "alpha3": a3, "C1": C1, "C2": C2}
PHASE = [x, y, z, w, q, p]
R = sp.Rational

H = (
    y**3 / (4 * t) + R(3, 2) * y**2 + (3 * a3 - 1) / t * x * y + R(3, 4) / t * z**2 * w**2
    + R(3, 2) * z**2 * w + (3 * a1 + 3 * a2 - 2) / (2 * t) * z * w + R(3, 2) * a1 * z
    - 4 / t * p**3 - 6 * p**2 - (3 * a1 + 3 * a2 + 3 * a3 - 2) / t * q * p - 6 * t * p
    + R(3, 4) / t * a1 * (8 * x * p + 2 * z * p + y * z) + 6 / t * a2 * x * p
    + R(3, 2) / t * a3 * (4 * x * p - y * q)
    + R(3, 4) / t * (8 * x * y * q * p - 4 * z * w * q * p + 8 * x * z * w * p - 8 * x**2 * y * p
                     + 2 * z**2 * w * p + y * z**2 * w - 2 * y * q**2 * p + 8 * w**2 * p - 4 * y * p**2
                     + 4 * y * w**2 + 4 * y**2 * w + 8 * y * w * p - 8 * x * p + 8 * t * y * w)
)


def field(Hh):
    return {x: sp.diff(Hh, y), y: -sp.diff(Hh, x), z: sp.diff(Hh, w), w: -sp.diff(Hh, z),
            q: sp.diff(Hh, p), p: -sp.diff(Hh, q)}


f0 = y + z**2 / 4
f2 = w + p + y / 2 + x * z / 2 - z * q / 4 + t
GENERATORS = {
    0: ({x: x + a0 / f0, w: w - a0 * z / (2 * f0)}, {a0: -a0, a1: a1 + 2 * a0}),
    1: ({z: z + a1 / w}, {a0: a0 + a1, a1: -a1, a2: a2 + a1}),
    2: ({x: x + a2 / 2 / f2, y: y - a2 * z / 2 / f2 - a2**2 / 4 / f2**2, z: z + a2 / f2,
         w: w + a2 * (q - 2 * x) / 4 / f2, q: q + a2 / f2, p: p + a2 * z / 4 / f2 + a2**2 / 8 / f2**2},
        {a1: a1 + a2, a2: -a2, a3: a3 + a2}),
    3: ({q: q + a3 / p}, {a2: a2 + 2 * a3, a3: -a3}),
}


def to_sympy(poly):
    """Convert a Poly (or RationalExpr) to a sympy expression."""
    from painleve_d42.algebra.rational import RationalExpr

    if isinstance(poly, RationalExpr):
        return to_sympy(poly.num) / to_sympy(poly.den)
    out = sp.Integer(0)
    for exps, c in poly.exponent_items():
        term = sp.Rational(int(c.numerator), int(c.denominator))
        for i, e in enumerate(exps):
            if e:
                term *= SYMS[U.name(i)] ** e
        out += term
    return out


def eliminate(e):
    return sp.expand(e.subs(a0, 1 - a1 - a2 - a3))
