"""Numeric shadows of the exact results: trajectories versus identities."""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from ..algebra import universe as U
from ..algebra.scalar import Q
from ..errors import PoleAtPoint, PoleEncountered
from ..hamiltonian import build_H, build_hamiltonian, generic_alpha
from ..principal import first_integral_I, k1_solution, k1_system, k2_tilde_system, k3_solution, k3_system
from ..weyl import DIVISORS, BirationalMap, apply_param_action, generator
from .core import CompiledField, PolyEvaluator, integrate

RTOL = 1e-11
ATOL = 1e-13


def _rel(a, b) -> float:
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


# ---- closed forms ------------------------------------------------------------
def closed_form_values(alpha, c1, c2):
    vals = {"alpha1": alpha[1], "alpha2": alpha[2], "alpha3": alpha[3], "C1": c1, "C2": c2}
    return vals


@dataclass
class ClosedFormNumeric:
    max_rel_dev: float
    ode_residual: float
    status: str


def closed_form_numeric_check(which: int, alpha, c1=Q(1, 2), c2=Q(-1, 3), t0=1.0, t1=2.0, samples=10,
                              rel_tol=RTOL, abs_tol=ATOL) -> ClosedFormNumeric:
    """Integrate the K1 (``which=1``) or K3 (``which=3``) flow from the closed form's
    initial value and compare at ``samples`` times; also evaluate the ODE
    residual of the closed form itself in floating point."""
    if which == 1:
        sys, sol, idx = k1_system(), k1_solution(), (U.X, U.Y)
    elif which == 3:
        sys, sol, idx = k3_system(), k3_solution(), (U.QV, U.P)
    else:
        raise ValueError("closed forms exist for K1 and K3 only")
    vals = closed_form_values(alpha, c1, c2)
    field = CompiledField(sys, alpha)
    te = np.linspace(t0, t1, samples)
    y0 = np.zeros(6)
    for k, s in zip(idx, sol):
        y0[k] = s.evaluate(t0, vals)
    tr = integrate(field, y0, t0, t1, rel_tol, abs_tol, t_eval=te)
    if tr.status != "ok":
        return ClosedFormNumeric(float("inf"), float("inf"), tr.status)
    dev = 0.0
    res = 0.0
    derivs = [s.deriv() for s in sol]
    for n, tv in enumerate(te):
        exact = np.array([s.evaluate(tv, vals) for s in sol])
        dev = max(dev, _rel(tr.y[n, list(idx)], exact))
        u = np.zeros(6)
        u[list(idx)] = exact
        rhs = field(tv, u)[list(idx)]
        lhs = np.array([d.evaluate(tv, vals) for d in derivs])
        res = max(res, _rel(lhs, rhs))
    return ClosedFormNumeric(dev, res, "ok")


# ---- Backlund maps -----------------------------------------------------------
def _float_image(m: BirationalMap, t, u, alpha):
    point = {U.PHASE_NAMES[k]: float(u[k]) for k in range(6)}
    point["t"] = float(t)
    try:
        img, _ = m.apply(point, alpha)
    except PoleAtPoint as exc:
        raise PoleEncountered(f"{m.name} has a pole on the trajectory", t) from exc
    return np.array([float(img[i]) for i in U.PHASE])


def _check_divisors(m: BirationalMap, trajectory, alpha, eps=1e-4):
    """Reject trajectories on which a divisor of ``m`` changes sign or gets small.

    Every accepted step is inspected, so a crossing between output samples is
    still caught.
    """
    for name, d in m.divisors:
        ev = PolyEvaluator(d, alpha)
        vals = np.array([ev(tv, u) for tv, u in zip(trajectory.t, trajectory.y)])
        if np.min(np.abs(vals)) < eps or np.any(np.sign(vals) != np.sign(vals[0])):
            k = int(np.argmin(np.abs(vals)))
            raise PoleEncountered(f"{m.name}: {name} (nearly) vanishes on the trajectory", float(trajectory.t[k]))


def backlund_numeric_check(m, alpha, init, t_span=(1.0, 2.0), samples=21, rel_tol=RTOL, abs_tol=ATOL,
                           param_action=None) -> float:
    """Max relative deviation between ``m`` applied to a trajectory and the
    trajectory of the transformed system started from the image point.

    ``m`` is a generator index or a BirationalMap; ``param_action`` overrides
    its parameter matrix (used to check that a wrong action is detected).
    """
    if isinstance(m, int):
        m = generator(m)
    alpha = [Q(a) for a in alpha]
    action = m.param_action if param_action is None else param_action
    alpha2 = apply_param_action(action, alpha)
    H = build_H()
    te = np.linspace(t_span[0], t_span[1], samples)
    field = CompiledField(H, alpha)
    dense = integrate(field, init, t_span[0], t_span[1], rel_tol, abs_tol)
    if dense.status != "ok":
        raise PoleEncountered("source trajectory blew up", dense.blowup_t)
    _check_divisors(m, dense, alpha)
    tr = integrate(field, init, t_span[0], t_span[1], rel_tol, abs_tol, t_eval=te)
    start = _float_image(m, te[0], tr.y[0], alpha)
    tr2 = integrate(CompiledField(H, alpha2), start, t_span[0], t_span[1], rel_tol, abs_tol, t_eval=te)
    if tr2.status != "ok":
        # the source stayed bounded away from the map's poles, so the image must too
        return float("inf")
    return max(_rel(_float_image(m, tv, u, alpha), v) for tv, u, v in zip(tr.t, tr.y, tr2.y))


def random_state(rng: random.Random, scale=0.5):
    return np.array([rng.uniform(-scale, scale) for _ in range(6)])


def backlund_numeric_shadow(m, seed=0, tries=30, **kw):
    """Run :func:`backlund_numeric_check` on random generic data, redrawing
    the data when the trajectory blows up or meets a pole of the map.

    Returns (deviation, alpha, initial state)."""
    rng = random.Random(f"backlund-numeric:{seed}")
    last = None
    for _ in range(tries):
        alpha = generic_alpha(rng, 6)
        init = random_state(rng)
        try:
            return backlund_numeric_check(m, alpha, init, **kw), alpha, init
        except PoleEncountered as exc:
            last = exc
    raise last


# ---- first integrals ---------------------------------------------------------
def integral_drift(poly, trajectory, alpha) -> float:
    """max |g(t) - g(t0)| / |g(t0)| along a trajectory."""
    ev = PolyEvaluator(poly, alpha)
    vals = np.array([ev(tv, u) for tv, u in zip(trajectory.t, trajectory.y)])
    ref = vals[0]
    if ref == 0:
        return float(np.max(np.abs(vals - ref)))
    return float(np.max(np.abs(vals - ref)) / abs(ref))


def first_integral_numeric_check(alpha, init_zw, t_span=(1.0, 2.0), rel_tol=RTOL, abs_tol=ATOL):
    """Drift of ``I = 4 t K2~`` along a K2~ trajectory (``init_zw`` = (z1, w1))."""
    field = CompiledField(k2_tilde_system(), alpha)
    y0 = np.zeros(6)
    y0[U.Z], y0[U.W] = init_zw
    tr = integrate(field, y0, t_span[0], t_span[1], rel_tol, abs_tol)
    if tr.status != "ok":
        raise PoleEncountered("K2~ trajectory blew up", tr.blowup_t)
    return integral_drift(first_integral_I(), tr, alpha), tr


def hamiltonian_drift(alpha, init, t_span=(1.0, 2.0), rel_tol=RTOL, abs_tol=ATOL) -> float:
    """Same statistic for H along the full flow (expected to be large)."""
    tr = integrate(CompiledField(build_H(), alpha), init, t_span[0], t_span[1], rel_tol, abs_tol)
    return integral_drift(build_hamiltonian(), tr, alpha)


# ---- invariant divisors ------------------------------------------------------
def on_divisor(i: int, rng: random.Random, t0=1.0, scale=0.5):
    """Random state on ``f_i = 0`` at time ``t0`` (solved for the divisor's variable)."""
    u = random_state(rng, scale)
    x, y, z, w, q, p = u
    if i == 0:
        u[U.Y] = -z * z / 4
    elif i == 1:
        u[U.W] = 0.0
    elif i == 2:
        u[U.W] = -(p + y / 2 + x * z / 2 - z * q / 4 + t0)
    elif i == 3:
        u[U.P] = 0.0
    return u


def alpha_with_zero(i: int, rng: random.Random):
    while True:
        a = generic_alpha(rng, 6)
        a[i] = Q(0)
        rest = [k for k in range(4) if k != i]
        s = sum(a[k] for k in rest[1:])
        a[rest[0]] = 1 - s
        if a[rest[0]].denominator != 1:
            return a


def divisor_numeric_check(i: int, seed=0, t_span=(1.0, 2.0), tries=30, rel_tol=RTOL, abs_tol=ATOL):
    """Max |f_i| along a trajectory started on f_i = 0 with alpha_i = 0.

    Returns (max |f_i|, alpha, initial state, trajectory)."""
    rng = random.Random(f"divisor-numeric:{i}:{seed}")
    f = DIVISORS[i].poly
    for _ in range(tries):
        alpha = alpha_with_zero(i, rng)
        init = on_divisor(i, rng, t_span[0])
        tr = integrate(CompiledField(build_H(), alpha), init, t_span[0], t_span[1], rel_tol, abs_tol)
        if tr.status != "ok":
            continue
        ev = PolyEvaluator(f, alpha)
        dev = max(abs(ev(tv, u)) for tv, u in zip(tr.t, tr.y))
        return dev, alpha, init, tr
    raise PoleEncountered("no trajectory stayed bounded on the span")
