"""Registry of verification checks, grouped into suites.

Every check is a function of an integer seed and a sample count, returning
``(status, detail)``. Seeds are derived from the run seed and the check id,
so a check's outcome does not depend on which other checks run or in what
order.
"""
from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .algebra import universe as U
from .hamiltonian import build_H, build_hamiltonian, eliminate_alpha0, first_integral_search, t, total_time_derivative

SUITES = ("all", "symmetry", "coxeter", "divisors", "translations", "principal", "holomorphy", "integrals")
STATUSES = ("pass", "fail", "skipped", "unresolved")
# expected orders of s_i s_j for the twisted affine diagram: a chain with double bonds at both ends
EXPECTED_ORDERS = {(0, 1): 4, (0, 2): 2, (0, 3): 2, (1, 2): 3, (1, 3): 2, (2, 3): 4}


@dataclass
class CheckReport:
    check_id: str
    status: str
    detail: str
    elapsed_ms: int = 0


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _fmt(v: float) -> str:
    return format(v, ".3e")


# ---- symmetry ------------------------------------------------------------------
def _backlund(i):
    def run(seed, samples):
        from .weyl import generator, is_backlund_symmetry

        rep = is_backlund_symmetry(generator(i), build_H())
        bad = [U.name(k) for k, r in rep.residuals.items() if not r.is_zero]
        return _verdict(rep.ok), "residual identically zero" if rep.ok else f"nonzero residuals: {bad}"

    return run


def _adjoint(i, v):
    def run(seed, samples):
        from .weyl import adjoint_series_check

        ok, order = adjoint_series_check(i, v)
        if i == 2 and order > 2:
            return "fail", f"series order {order} exceeds 2"
        return _verdict(ok), f"series order {order}"

    return run


def _backlund_numeric(i):
    def run(seed, samples):
        from .numerics.shadow import backlund_numeric_shadow

        dev, alpha, _ = backlund_numeric_shadow(i, seed=seed)
        return _verdict(dev <= 1e-6), f"max relative deviation {_fmt(dev)} on [1,2] (tol 1e-6)"

    return run


def _particular(seed, samples):
    from .weyl import alpha2_particular_transform

    rep = alpha2_particular_transform()
    ok = rep.w2_matches_f2 and rep.symplectic and rep.invariant
    return _verdict(ok), f"w2=f2 {rep.w2_matches_f2}, symplectic {rep.symplectic}, w2=0 invariant at alpha2=0 {rep.invariant}"


# ---- coxeter ---------------------------------------------------------------------
def _involution(i):
    def run(seed, samples):
        from .weyl import involution_check

        n = max(samples, 20)
        return _verdict(involution_check(i, n, seed)), f"s{i}^2 = id at {n} exact points"

    return run


def _order(i, j):
    def run(seed, samples):
        from .weyl import weyl_relation_order

        n = max(samples, 20)
        got = weyl_relation_order(i, j, n, seed)
        want = EXPECTED_ORDERS[(i, j)]
        if got is None:
            return "unresolved", f"orders disagree across {n} points (expected {want})"
        return _verdict(got == want), f"order {got} at {n} points (expected {want})"

    return run


# ---- divisors ----------------------------------------------------------------------
def _divisor(i):
    def run(seed, samples):
        from .numerics.shadow import divisor_numeric_check
        from .weyl import invariant_divisor_check

        ok, residual = invariant_divisor_check(i, build_H())
        dev, _, _, _ = divisor_numeric_check(i, seed=seed)
        detail = f"exact residual {'0' if ok else residual}; numeric max|f{i}| {_fmt(dev)} on [1,2] (tol 1e-9)"
        return _verdict(ok and dev <= 1e-9), detail

    return run


# ---- translations ------------------------------------------------------------------
def _translation(k):
    def run(seed, samples):
        from .weyl import EXPECTED_SHIFTS, apply_word, random_pole_free, translation

        tr = translation(k)
        rng = random.Random(seed)
        point, alpha = random_pole_free(rng, [tr.word])
        _, img_alpha = apply_word(tr.word, point, alpha)
        point_shift = tuple(int(a - b) for a, b in zip(img_alpha, alpha))
        ok = tr.matches and point_shift == EXPECTED_SHIFTS[k]
        word = " ".join(f"s{g}" for g in tr.word)
        return _verdict(ok), f"word '{word}' shifts alpha by ({','.join(str(s) for s in tr.shift)})"

    return run


# ---- principal parts -----------------------------------------------------------------
def _restrict(k):
    def run(seed, samples):
        from . import principal as P

        sysf = {1: P.k1_system, 2: P.k2_system, 3: P.k3_system}[k]
        exp = {1: P.k1_expected, 2: P.k2_expected, 3: P.k3_expected}[k]
        got = sysf().H
        return _verdict(got == exp()), f"K{k} = {got}"

    return run


def _closed_form(k):
    def run(seed, samples):
        from . import principal as P

        sol = P.k1_solution() if k == 1 else P.k3_solution()
        sysm = P.k1_system() if k == 1 else P.k3_system()
        rep = P.verify_closed_form(sol, sysm)
        return _verdict(rep.ok), "residual ExpSum identically zero" if rep.ok else f"residuals {rep.residuals}"

    return run


def _closed_form_numeric(k):
    def run(seed, samples):
        from .numerics.shadow import closed_form_numeric_check
        from .principal import nonresonant_alpha

        rng = random.Random(seed)
        worst, worst_res = 0.0, 0.0
        n = max(5, min(samples, 20))
        for _ in range(n):
            r = closed_form_numeric_check(k, nonresonant_alpha(rng))
            worst = max(worst, r.max_rel_dev)
            worst_res = max(worst_res, r.ode_residual)
        ok = worst <= 1e-8 and worst_res <= 1e-10
        return _verdict(ok), f"{n} parameter draws: trajectory deviation {_fmt(worst)} (tol 1e-8), ODE residual {_fmt(worst_res)} (tol 1e-10)"

    return run


def _k2(seed, samples):
    from .principal import k2_transform

    rep = k2_transform()
    ok = rep.matches and rep.symplectic
    return _verdict(ok), f"correction {rep.correction}; matches {rep.matches}; symplectic {rep.symplectic}; {rep.note}"


def _integral_I(seed, samples):
    from .principal import first_integral_I_check

    return _verdict(first_integral_I_check()), "{K2~, I} + dI/dt identically zero"


def _integral_I_numeric(seed, samples):
    from .numerics.shadow import first_integral_numeric_check
    from .principal import nonresonant_alpha

    rng = random.Random(seed)
    alpha = nonresonant_alpha(rng)
    drift, _ = first_integral_numeric_check(alpha, (rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)))
    return _verdict(drift <= 1e-8), f"relative drift of I {_fmt(drift)} on [1,2] (tol 1e-8)"


def _k1_not_integral(seed, samples):
    from .principal import integral_defect, k1_system

    s = k1_system()
    d = integral_defect(4 * t * s.H, s)
    return _verdict(not d.is_zero), "4tK1 has nonzero total derivative on the K1 flow"


# ---- holomorphy ------------------------------------------------------------------
def _chart_roundtrip(seed, samples):
    from .holomorphy import chart

    res = [chart(i).round_trip() for i in range(4)]
    return _verdict(all(res)), f"exact round trips {res}"


def _holo_H(i):
    def run(seed, samples):
        from .holomorphy import check_holomorphy

        rep = check_holomorphy(build_hamiltonian(), i)
        what = "H - z" if i == 2 else "H"
        return _verdict(rep.ok), f"{what} in chart r{i}: {rep.describe()}"

    return run


def _holo_family(i):
    def run(seed, samples):
        from .holomorphy import ansatz_family, check_holomorphy

        rep = check_holomorphy(ansatz_family(), i)
        return _verdict(rep.ok), f"H + sum a_k (y+2p)^k in chart r{i}: {rep.describe()}"

    return run


def _ansatz(seed, samples):
    from .holomorphy import ansatz_solve

    n = max(samples, 5) if samples else 5
    rng = random.Random(seed)
    dims, fam, const = set(), True, True
    for _ in range(n):
        sol = ansatz_solve(seed=rng.randrange(2**31))
        dims.add(sol.dimension)
        fam = fam and sol.family_contained
        const = const and sol.contains_constant
    detail = f"{n} samples; dimensions {sorted(dims)}; H and (y+2p)^1..4 contained {fam}; constant direction {const}"
    if len(dims) != 1:
        return "unresolved", detail
    return _verdict(fam), detail


def _direction_not_integral(seed, samples):
    from .holomorphy import direction_is_not_integral

    d = direction_is_not_integral()
    return _verdict(not d.is_zero), "d(y+2p)/dt under H + sum a_k (y+2p)^k is nonzero"


# ---- integrals ----------------------------------------------------------------------
def _H_not_integral(seed, samples):
    d = eliminate_alpha0(total_time_derivative(build_hamiltonian(), build_H()))
    return _verdict(not d.is_zero), f"dH/dt = {d}"


def _y2p_not_integral(seed, samples):
    from .hamiltonian import p, y

    d = eliminate_alpha0(total_time_derivative(y + 2 * p, build_H()))
    return _verdict(not d.is_zero), f"d(y+2p)/dt = {d}"


def _search(window):
    def run(seed, samples):
        from .hamiltonian import generic_alpha

        alpha = generic_alpha(random.Random(seed))
        res = first_integral_search(build_H(), 2, window, alpha=alpha)
        consts = all(g.is_constant() for g in res.basis)
        basis = "; ".join(str(g) for g in res.basis)
        detail = f"t-window {list(window)}: {len(res.basis)}-dimensional solution space, basis {{{basis}}}"
        return _verdict(consts), detail

    return run


def _H_drift(seed, samples):
    from .numerics.shadow import hamiltonian_drift, random_state
    from .hamiltonian import generic_alpha

    rng = random.Random(seed)
    drift = float("nan")
    for _ in range(30):
        drift = hamiltonian_drift(generic_alpha(rng, 6), random_state(rng))
        if drift == drift and drift != float("inf"):
            break
    return _verdict(drift > 1e-3), f"relative drift of H {_fmt(drift)} along the full flow (expected large)"


def _registry():
    reg = {}

    def add(suite, cid, fn):
        reg[cid] = (suite, fn)

    for i in range(4):
        add("symmetry", f"symmetry.backlund.s{i}", _backlund(i))
        for v in U.PHASE_NAMES:
            add("symmetry", f"symmetry.adjoint.s{i}.{v}", _adjoint(i, v))
        add("symmetry", f"symmetry.numeric.s{i}", _backlund_numeric(i))
    add("symmetry", "symmetry.particular.alpha2", _particular)
    for i in range(4):
        add("coxeter", f"coxeter.involution.s{i}", _involution(i))
    for (i, j) in EXPECTED_ORDERS:
        add("coxeter", f"coxeter.order.s{i}s{j}", _order(i, j))
    for i in range(4):
        add("divisors", f"divisors.f{i}", _divisor(i))
    for k in (1, 2, 3):
        add("translations", f"translations.T{k}", _translation(k))
    for k in (1, 2, 3):
        add("principal", f"principal.restrict.K{k}", _restrict(k))
    for k in (1, 3):
        add("principal", f"principal.closed_form.K{k}", _closed_form(k))
        add("principal", f"principal.closed_form_numeric.K{k}", _closed_form_numeric(k))
    add("principal", "principal.k2_transform", _k2)
    add("principal", "principal.integral_I", _integral_I)
    add("principal", "principal.integral_I_numeric", _integral_I_numeric)
    add("principal", "principal.not_integral_4tK1", _k1_not_integral)
    add("holomorphy", "holomorphy.charts.roundtrip", _chart_roundtrip)
    for i in range(4):
        add("holomorphy", f"holomorphy.H.r{i}", _holo_H(i))
        add("holomorphy", f"holomorphy.family.r{i}", _holo_family(i))
    add("holomorphy", "holomorphy.ansatz", _ansatz)
    add("holomorphy", "holomorphy.direction_not_integral", _direction_not_integral)
    add("integrals", "integrals.H_not_integral", _H_not_integral)
    add("integrals", "integrals.y2p_not_integral", _y2p_not_integral)
    add("integrals", "integrals.search.t_free", _search((0, 0)))
    add("integrals", "integrals.search.window", _search((-3, 3)))
    add("integrals", "integrals.H_numeric_drift", _H_drift)
    return reg


REGISTRY = _registry()


def check_ids(suite: str) -> list:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return sorted(cid for cid, (s, _) in REGISTRY.items() if suite == "all" or s == suite)


def derive_seed(seed: int, check_id: str) -> int:
    return random.Random(f"{seed}:{check_id}").randrange(2**31)


def run_check(check_id: str, seed: int = 0, samples: int = 20, timing: bool = False) -> CheckReport:
    _, fn = REGISTRY[check_id]
    start = time.perf_counter()
    try:
        status, detail = fn(derive_seed(seed, check_id), samples)
    except Exception as exc:  # a crashing check is a failure with its reason
        status, detail = "fail", f"{type(exc).__name__}: {exc}"
    elapsed = int((time.perf_counter() - start) * 1000) if timing else 0
    if status == "fail" and not detail:
        detail = "failed"
    return CheckReport(check_id, status, detail, elapsed)


def _run_star(args):
    return run_check(*args)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("PD42_WORKERS", "1")))
    except ValueError:
        return 1


def run_suite(suite: str, seed: int = 0, samples: int = 20, timing: bool = False, workers: int | None = None) -> list:
    """Run a suite; reports come back sorted by check id."""
    ids = check_ids(suite)
    workers = worker_count() if workers is None else workers
    jobs = [(cid, seed, samples, timing) for cid in ids]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_star, jobs))
    else:
        reports = [_run_star(j) for j in jobs]
    return sorted(reports, key=lambda r: r.check_id)


def reports_to_json(reports) -> list:
    return [asdict(r) for r in reports]
