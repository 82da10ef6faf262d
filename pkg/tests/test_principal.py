import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

import sympy_oracle as O
from painleve_d42.algebra import universe as U
from painleve_d42.algebra.poly import Poly
from painleve_d42.algebra.rational import RationalExpr
from painleve_d42.algebra.scalar import Q
from painleve_d42.errors import DegenerateParameters
from painleve_d42.hamiltonian import alpha0, alpha1, alpha2, alpha3, eliminate_alpha0, t
from painleve_d42.principal import (
    C1,
    C2,
    ExpSum,
    first_integral_I,
    first_integral_I_check,
    integral_defect,
    is_resonant,
    k1_expected,
    k1_solution,
    k1_system,
    k2_expected,
    k2_system,
    k2_tilde_expected,
    k2_tilde_system,
    k2_transform,
    k3_expected,
    k3_solution,
    k3_system,
    nonresonant_alpha,
    verify_closed_form,
)

small = st.integers(-3, 3)
affine = st.tuples(small, small, small, small).map(lambda c: c[0] + c[1] * alpha1 + c[2] * alpha2 + c[3] * alpha3)
coef = st.tuples(small.filter(bool), st.integers(0, 2)).map(lambda c: c[0] * C1 ** c[1])
expsums = st.lists(st.tuples(affine, coef), max_size=3).map(ExpSum)


@given(expsums, expsums)
@settings(max_examples=40, deadline=None)
def test_leibniz_rule(f, g):
    assert (f * g).deriv() == f.deriv() * g + f * g.deriv()


@given(expsums, expsums)
@settings(max_examples=40, deadline=None)
def test_expsum_ring(f, g):
    assert f + g == g + f
    assert f * g == g * f
    assert (f - f).is_zero


def test_time_free_derivative_vanishes():
    assert ExpSum.const(C1 + alpha2).deriv().is_zero


def test_exponents_merge_modulo_sum_rule():
    a = ExpSum.monomial(1, alpha0 + alpha1 + alpha2)
    b = ExpSum.monomial(1, 1 - alpha3)
    assert len(a + b) == 1


def test_subsystems_restrict_exactly():
    assert k1_system().H == k1_expected()
    assert k2_system().H == k2_expected()
    assert k3_system().H == k3_expected()


def test_k1_solution_shape():
    x, y = k1_solution()
    s = alpha0 + alpha1 + alpha2
    assert y.exponents() == [ExpSum.monomial(1, s - 2 * alpha3).exponents()[0]]
    assert x.coefficient(-4 + 6 * s) == eliminate_alpha0(RationalExpr(C1**2, 4 * (s - 2 * alpha3)))
    x0 = x.specialize({"C1": 0})
    assert len(x0) == 1 and x0.coefficient(2 - 3 * s) == RationalExpr(C2)


def test_k3_solution_shape():
    q, p = k3_solution()
    r = alpha1 + alpha2 + alpha3
    assert p.exponents()[0] == ExpSum.monomial(1, 1 - 3 * alpha0).exponents()[0]
    assert q.coefficient(-1 + 3 * alpha0) == RationalExpr(C2)
    q0 = q.specialize({"C1": 0, "C2": 0})
    assert len(q0) == 1 and q0.coefficient(2) == RationalExpr(-2, r)
    assert p.specialize({"C1": 0}).is_zero


def test_closed_forms_are_exact_solutions():
    assert verify_closed_form(k1_solution(), k1_system()).ok
    assert verify_closed_form(k3_solution(), k3_system()).ok


def test_perturbed_closed_form_is_caught():
    x, y = k1_solution()
    s = alpha0 + alpha1 + alpha2
    bad = x + ExpSum.monomial(1, -4 + 6 * s)
    rep = verify_closed_form((bad, y), k1_system())
    assert not rep.ok and not rep.residuals["x"].is_zero


def test_closed_forms_against_sympy():
    # independent check: substitute sympy versions of the formulas into the sympy field
    s = O.a0 + O.a1 + O.a2
    X = O.C1 / (s - O.a3) * O.t ** (-1 + 3 * s) + O.C1**2 / (4 * (s - 2 * O.a3)) * O.t ** (-4 + 6 * s) + O.C2 * O.t ** (2 - 3 * s)
    Y = O.C1 * O.t ** (s - 2 * O.a3)
    K1 = O.H.subs({O.z: 0, O.w: 0, O.q: 0, O.p: 0})
    F = O.field(K1)
    vals = {O.a1: sp.Rational(1, 3), O.a2: sp.Rational(2, 7), O.a3: sp.Rational(1, 11), O.C1: 2, O.C2: -1}
    vals[O.a0] = 1 - vals[O.a1] - vals[O.a2] - vals[O.a3]
    for tv in (sp.Rational(3, 2), sp.Rational(7, 4)):
        sub = {O.x: X, O.y: Y}
        for var, sol in ((O.x, X), (O.y, Y)):
            lhs = sp.diff(sol, O.t)
            rhs = F[var].subs(sub, simultaneous=True)
            val = (lhs - rhs).subs(vals).subs(O.t, tv)
            assert abs(sp.N(val, 30)) < 1e-25


def test_degenerate_parameters():
    with pytest.raises(DegenerateParameters):
        verify_closed_form(k1_solution(), k1_system(), alpha=[Q(1, 3), Q(1, 3), 0, Q(1, 3)])
    assert is_resonant([Q(1, 3), Q(1, 3), 0, Q(1, 3)])
    a = nonresonant_alpha(random.Random(4))
    assert verify_closed_form(k1_solution(), k1_system(), alpha=a).ok
    assert verify_closed_form(k3_solution(), k3_system(), alpha=a).ok


def test_k2_transform():
    rep = k2_transform()
    assert rep.correction == Poly.var("z") * Poly.var("w") * t**-1
    assert rep.symplectic
    assert rep.matches and rep.transformed == k2_tilde_expected()
    transformed, ok = rep
    assert ok


def test_k2_transform_against_sympy():
    z1, w1 = sp.symbols("z1 w1")
    K2 = O.H.subs({O.x: 0, O.y: 0, O.q: 0, O.p: 0})
    Kt = K2.subs({O.z: z1 / O.t, O.w: O.t * w1}, simultaneous=True) + z1 * w1 / O.t
    expected = 3 * z1 * (z1 * w1**2 + 2 * z1 * w1 + 2 * (O.a1 + O.a2) * w1 + 2 * O.a1) / (4 * O.t)
    assert sp.simplify(Kt - expected) == 0


def test_first_integral_I():
    assert first_integral_I_check()
    assert integral_defect(Poly.const(5), k2_tilde_system()).is_zero
    s = k1_system()
    assert not integral_defect(4 * t * s.H, s).is_zero
