import sympy as sp
from hypothesis import given, settings, strategies as st

from painleve_d42.algebra import universe as U
from painleve_d42.algebra.linalg import in_span, nullspace, rank, solve_affine
from painleve_d42.algebra.poly import Poly, exponent, mono_div, mono_mul, pack, unpack
from painleve_d42.algebra.rational import RationalExpr, substitute
from painleve_d42.algebra.scalar import Q, scalar_str, to_scalar
from painleve_d42.errors import InconsistentSystem, PoleAtPoint

from sympy_oracle import to_sympy

VARS = ["x", "y", "z", "t", "alpha1"]

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6).map(to_scalar)
exps = st.tuples(*[st.integers(0, 3)] * 3, st.integers(-2, 2), st.integers(0, 1))


@st.composite
def polys(draw, max_terms=5):
    n = draw(st.integers(0, max_terms))
    out = Poly()
    for _ in range(n):
        c = draw(coeffs)
        e = draw(exps)
        mono = Poly.const(c)
        for v, k in zip(VARS, e):
            if k:
                mono = mono * Poly.var(v, k)
        out = out + mono
    return out


points = st.fixed_dictionaries({v: st.fractions(min_value=-3, max_value=3, max_denominator=5).filter(bool).map(to_scalar) for v in VARS})


@given(polys(), polys(), polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert a * 1 == a


@given(polys(), points)
@settings(max_examples=60, deadline=None)
def test_evaluate_is_a_homomorphism(a, pt):
    b = a * a + 3
    assert b.evaluate(pt) == a.evaluate(pt) ** 2 + 3


@given(polys(), polys())
@settings(max_examples=60, deadline=None)
def test_exact_divide_round_trip(a, b):
    if b.is_zero:
        return
    prod = a * b
    assert prod.exact_divide(b) == a


def test_exact_divide_rejects_non_multiple():
    x, y = Poly.var("x"), Poly.var("y")
    assert (x**2 + y).exact_divide(x + y) is None


@given(st.lists(st.integers(0, 40), min_size=6, max_size=6), st.integers(-100, 100))
def test_pack_round_trip(e, te):
    full = tuple(e) + (te,)
    m = pack(full)
    got = unpack(m)
    assert tuple(got) + (0,) * (7 - len(got)) == full
    assert exponent(m, U.T) == te


def test_monomial_division_guard():
    a = pack((2, 1, 0, 0, 0, 0, -1))
    b = pack((1, 1, 0, 0, 0, 0, 1))
    assert mono_div(mono_mul(a, b), b) == a
    assert mono_div(b, a) is None  # x exponent would go negative


@given(polys())
@settings(max_examples=60, deadline=None)
def test_string_round_trip(a):
    assert Poly.parse(a.to_string()) == a


@given(polys(), polys(), points)
@settings(max_examples=40, deadline=None)
def test_substitute_commutes_with_evaluation(a, b, pt):
    den = b * b + 1  # never vanishes at rational points
    r = RationalExpr(b, den)
    s = substitute(a, {"x": r})
    pt2 = dict(pt)
    pt2["x"] = r.evaluate(pt)
    assert s.evaluate(pt) == a.evaluate(pt2)


@given(polys(), polys())
@settings(max_examples=40, deadline=None)
def test_rational_normalization_idempotent_and_equality(a, b):
    if b.is_zero:
        return
    r = RationalExpr(a, b)
    again = RationalExpr(r.num, r.den)
    assert again.num == r.num and again.den == r.den
    assert r == RationalExpr(a * 3, b * 3)
    if not a.is_zero:
        assert r * r.inverse() == 1


def test_rational_against_sympy():
    x, y, t = Poly.var("x"), Poly.var("y"), Poly.var("t")
    r = RationalExpr(x + y, x - y) + RationalExpr(1, x * t)
    e = to_sympy(r)
    X, Y, T = sp.symbols("x y t")
    assert sp.simplify(e - ((X + Y) / (X - Y) + 1 / (X * T))) == 0
    d = r.deriv("x")
    assert sp.simplify(to_sympy(d) - sp.diff(e, X)) == 0


def test_cancel_removes_listed_factor():
    x, y = Poly.var("x"), Poly.var("y")
    f = x + y
    r = RationalExpr(f * (x - 1), f * y)
    c = r.cancel([f])
    assert c.den == y and c == r


def test_pole_at_point():
    r = RationalExpr(1, Poly.var("x") - 1)
    try:
        r.evaluate({"x": 1})
    except PoleAtPoint:
        pass
    else:
        raise AssertionError("expected a pole")
    try:
        Poly.var("t", -1).evaluate({"t": 0})
    except PoleAtPoint:
        pass
    else:
        raise AssertionError("expected a pole")


def test_scalars_exact():
    assert to_scalar("3/4") == Q(3, 4)
    assert to_scalar("0.1") == Q(1, 10)
    assert to_scalar(0.5) == Q(1, 2)
    assert scalar_str(Q(-6, 4)) == "-3/2"
    assert scalar_str(Q(4)) == "4"


def _sympy_nullity(rows, n):
    M = sp.Matrix([[sp.Rational(int(r.get(j, 0).numerator), int(r.get(j, 0).denominator)) if j in r else 0 for j in range(n)] for r in rows])
    return len(M.nullspace())


@given(st.lists(st.dictionaries(st.integers(0, 5), st.integers(-4, 4).map(Q), max_size=4), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_nullspace_against_sympy(rows):
    rows = [{k: v for k, v in r.items() if v} for r in rows]
    null = nullspace(rows, 6)
    assert len(null) == _sympy_nullity(rows, 6)
    for v in null:
        for r in rows:
            assert sum(c * v[k] for k, c in r.items()) == 0
    assert rank(rows) + len(null) == 6


def test_solve_affine_and_inconsistency():
    rows = [{0: Q(1), 1: Q(1)}, {1: Q(2), 2: Q(1)}]
    part, null = solve_affine(rows, [Q(3), Q(1)], 3)
    assert part[0] + part[1] == 3 and 2 * part[1] + part[2] == 1
    assert len(null) == 1
    try:
        solve_affine([{0: Q(1)}, {0: Q(2)}], [Q(1), Q(3)], 1)
    except InconsistentSystem:
        pass
    else:
        raise AssertionError("expected inconsistency")
    assert in_span(null, [2 * c for c in null[0]])
    assert not in_span(null, [Q(1), Q(0), Q(0)])
