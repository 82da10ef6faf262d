import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

import sympy_oracle as O
from painleve_d42.algebra import universe as U
from painleve_d42.algebra.poly import Poly
from painleve_d42.algebra.rational import RationalExpr
from painleve_d42.algebra.scalar import Q
from painleve_d42.hamiltonian import alpha1, alpha3, build_hamiltonian, p, q, w, x, y, z
from painleve_d42.holomorphy import (
    DIRECTION,
    ansatz_family,
    ansatz_solve,
    chart,
    check_holomorphy,
    direction_is_not_integral,
)

H = build_hamiltonian()


def test_chart_images():
    assert chart(1).forward[U.W] == RationalExpr(-(w * z + alpha1) * z)
    assert chart(3).forward[U.P] == RationalExpr(-(p * q + alpha3) * q)
    assert chart(0).forward[U.X] == RationalExpr(1, x)


@pytest.mark.parametrize("i", range(4))
def test_round_trips(i):
    assert chart(i).round_trip()


@pytest.mark.parametrize("i", range(4))
def test_H_is_holomorphic(i):
    assert check_holomorphy(H, i).ok


def test_chart2_needs_adjustment():
    rep = check_holomorphy(H, 2, adjust=False)
    assert not rep.ok
    assert rep.offending == {-1: Poly.const(1)}  # exactly the 1/z2 from z itself
    assert not check_holomorphy(H - z, 1).ok


@pytest.mark.parametrize("i", range(4))
def test_direction_squared_is_holomorphic(i):
    # the adjustment belongs to the Hamiltonian, not to the added directions
    assert check_holomorphy(DIRECTION**2, i, adjust=False).ok


def test_non_member_rejected():
    assert not check_holomorphy(H + x, 0).ok
    assert not check_holomorphy(H + z, 1).ok


@pytest.mark.parametrize("i", range(4))
def test_symbolic_family_is_holomorphic(i):
    assert check_holomorphy(ansatz_family(), i).ok


@given(st.lists(st.fractions(-5, 5, max_denominator=7), min_size=4, max_size=4))
@settings(max_examples=10, deadline=None)
def test_rational_family_members(coeffs):
    K = ansatz_family([Q(c.numerator, c.denominator) for c in coeffs])
    assert K.degree() <= 4
    assert all(check_holomorphy(K, i).ok for i in range(4))


def test_chart1_against_sympy():
    z1, w1 = sp.symbols("z1 w1")
    e = O.H.subs({O.z: 1 / z1, O.w: -(w1 * z1 + O.a1) * z1}, simultaneous=True)
    num, den = sp.fraction(sp.together(sp.expand(e)))
    assert not den.has(z1)


def test_ansatz_solution_space():
    dims = set()
    rng = random.Random(11)
    for _ in range(3):
        sol = ansatz_solve(seed=rng.randrange(1000))
        dims.add(sol.dimension)
        assert sol.contains_H
        assert all(sol.contains_directions.values())
        assert sol.contains_constant
        assert len(sol.columns) == 210
    assert dims == {5}


def test_ansatz_rejects_zero_time():
    with pytest.raises(ValueError):
        ansatz_solve(t0=0)


def test_direction_is_not_an_integral():
    assert not direction_is_not_integral().is_zero
    assert not direction_is_not_integral(H).is_zero
