import random

import pytest
import sympy as sp

import sympy_oracle as O
from painleve_d42.algebra import universe as U
from painleve_d42.algebra.poly import Poly
from painleve_d42.algebra.scalar import Q
from painleve_d42.errors import BudgetExceeded, PoleAtPoint
from painleve_d42.hamiltonian import build_H
from painleve_d42.weyl import (
    DIVISORS,
    EXPECTED_SHIFTS,
    IDENTITY_ACTION,
    BirationalMap,
    adjoint_series,
    adjoint_series_check,
    alpha2_particular_transform,
    apply_word,
    compose,
    compose_param_action,
    generator,
    invariant_divisor_check,
    involution_check,
    is_backlund_symmetry,
    parse_word,
    translation,
    weyl_relation_order,
)


@pytest.mark.parametrize("i", range(4))
def test_generators_are_symmetries(i):
    assert is_backlund_symmetry(generator(i), build_H()).ok


@pytest.mark.parametrize("i", range(4))
def test_generator_images_match_sympy(i):
    img, par = O.GENERATORS[i]
    m = generator(i)
    for name, sym in zip(U.PHASE_NAMES, O.PHASE):
        ours = O.to_sympy(m.image(name))
        theirs = img.get(sym, sym)
        assert sp.simplify(ours - theirs) == 0
    for k, a in enumerate((O.a0, O.a1, O.a2, O.a3)):
        ours = O.to_sympy(m.param_bindings()[U.ALPHAS[k]])
        assert sp.expand(ours - par.get(a, a)) == 0


@pytest.mark.parametrize("i", [1, 3])
def test_symmetry_against_sympy_oracle(i):
    img, par = O.GENERATORS[i]
    F = O.field(O.H)
    Fp = {k: v.subs(par, simultaneous=True) for k, v in F.items()}
    for u in O.PHASE:
        su = img.get(u, u)
        lhs = sum(sp.diff(su, v) * F[v] for v in O.PHASE) + sp.diff(su, O.t)
        rhs = Fp[u].subs({v: img.get(v, v) for v in O.PHASE}, simultaneous=True)
        assert sp.simplify(O.eliminate(sp.together(lhs - rhs))) == 0


def test_mutated_map_is_rejected():
    m = generator(1)
    wrong = BirationalMap(m.images, IDENTITY_ACTION, "s1-bad", m.divisors)
    assert not is_backlund_symmetry(wrong, build_H()).ok


@pytest.mark.parametrize("i", range(4))
def test_involutions(i):
    assert involution_check(i, 20, seed=5)
    sq = compose([i, i])
    for v in U.PHASE:
        assert sq.image(v) == Poly.var(v)
    assert sq.param_action == IDENTITY_ACTION


@pytest.mark.parametrize("pair,order", [((0, 1), 4), ((0, 2), 2), ((0, 3), 2), ((1, 2), 3), ((1, 3), 2), ((2, 3), 4)])
def test_relation_orders(pair, order):
    assert weyl_relation_order(*pair, sample_count=20, seed=2) == order


@pytest.mark.parametrize("i", range(4))
def test_invariant_divisors(i):
    ok, residual = invariant_divisor_check(i, build_H())
    assert ok and residual.is_zero


def test_divisor_fails_without_vanishing_parameter():
    from painleve_d42.hamiltonian import eliminate_alpha0, total_time_derivative

    d = DIVISORS[1]
    deriv = eliminate_alpha0(total_time_derivative(d.poly, build_H()))
    assert not deriv.reduce_mod(d.poly, d.solved_var).is_zero


@pytest.mark.parametrize("k", [1, 2, 3])
def test_translations(k):
    tr = translation(k)
    assert tr.shift == EXPECTED_SHIFTS[k]


def test_translation_on_point():
    pt = {"x": Q(1, 3), "y": 1, "z": Q(2, 7), "w": 2, "q": 5, "p": Q(1, 9), "t": Q(3, 2)}
    alpha = [Q(1, 2), Q(1, 3), Q(1, 7), Q(1, 42)]
    _, img = apply_word("s1 s2 s3 s2 s1 s0", pt, alpha)
    assert [b - a for a, b in zip(alpha, img)] == [-2, 2, 0, 0]


def test_symbolic_translation_exceeds_budget():
    with pytest.raises(BudgetExceeded):
        compose(translation(1).word, budget=2000)


@pytest.mark.parametrize("i", range(4))
@pytest.mark.parametrize("v", U.PHASE_NAMES)
def test_adjoint_series(i, v):
    ok, order = adjoint_series_check(i, v)
    assert ok
    if i == 2:
        assert order <= 2


def test_adjoint_series_orders():
    _, order = adjoint_series(2, Poly.var("y"))
    assert order == 2
    _, order = adjoint_series(1, Poly.var("z"))
    assert order == 1


def test_apply_example_and_pole():
    pt = {"x": 1, "y": 1, "z": 0, "w": 2, "q": 0, "p": 0, "t": 1}
    img, alpha = generator(1).apply(pt, [0, 1, 0, 0])
    assert img[U.Z] == Q(1, 2)
    assert alpha == [1, -1, 1, 0]
    with pytest.raises(PoleAtPoint):
        generator(1).apply(dict(pt, w=0), [0, 1, 0, 0])


def test_parse_word():
    assert parse_word("s1 s2 s0") == [1, 2, 0]
    with pytest.raises(ValueError):
        parse_word("s4")


def test_param_action_composition_left_to_right():
    a = [Q(1, 3), Q(1, 5), Q(1, 7), 1 - Q(1, 3) - Q(1, 5) - Q(1, 7)]
    from painleve_d42.weyl import apply_param_action

    one = apply_param_action(compose_param_action([1, 2]), a)
    two = apply_param_action(compose_param_action([2]), apply_param_action(compose_param_action([1]), a))
    assert one == two


def test_alpha2_particular_transform():
    rep = alpha2_particular_transform()
    assert rep.w2_matches_f2 and rep.symplectic and rep.invariant
