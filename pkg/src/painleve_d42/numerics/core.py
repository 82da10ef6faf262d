"""Floating-point flow of the Hamiltonian system.

The vector field is compiled from the exact equations of motion into a flat
term table and handed to a Dormand-Prince 5(4) stepper. The compiled kernel
is used when it has been built; ``PD42_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

from ..algebra import universe as U
from ..algebra.poly import Poly, unpack
from ..hamiltonian import HamiltonianSystem, equations_of_motion, parameter_values

if os.environ.get("PD42_PURE_PYTHON"):
    from . import _pykernels as _k

    BACKEND = "python"
else:
    try:
        from . import _kernels as _k

        BACKEND = "compiled"
    except ImportError:  # extension not built
        from . import _pykernels as _k

        BACKEND = "python"

BLOWUP_NORM = 1e8
MIN_STEP = 1e-12
MAX_STEPS = 1_000_000
CSV_HEADER = ("t",) + U.PHASE_NAMES


def _term_table(polys: dict):
    """Flatten {component: Poly in x..p, t} into (coef, comp, exps) arrays."""
    coef, comp, exps = [], [], []
    allowed = set(U.PHASE) | {U.T}
    for k, poly in polys.items():
        for m, c in poly.terms.items():
            e = list(unpack(m))
            if any(v for i, v in enumerate(e) if v and i not in allowed):
                raise ValueError(f"component {U.name(k)} still has symbolic parameters")
            e = (e + [0] * 7)[:7]
            coef.append(float(c))
            comp.append(k)
            exps.append(e)
    return (
        np.array(coef, dtype=np.float64),
        np.array(comp, dtype=np.int_),
        np.array(exps, dtype=np.int_).reshape(-1, 7),
    )


class CompiledField:
    """Numeric right-hand side of a system at fixed parameters."""

    def __init__(self, system: HamiltonianSystem, alpha):
        self.system = system
        self.alpha = list(alpha)
        fixed = system.with_parameters(alpha)
        self.exact = equations_of_motion(fixed)
        self.coef, self.comp, self.exps = _term_table(self.exact.components)

    def __call__(self, t, u):
        return _k.eval_field(self.coef, self.comp, self.exps, float(t), np.ascontiguousarray(u, dtype=np.float64))

    def exact_value(self, point) -> list:
        return [self.exact.components[i].evaluate(point) for i in U.PHASE]


class PolyEvaluator:
    """Float evaluation of one polynomial in x..p, t (parameters fixed)."""

    def __init__(self, poly: Poly, alpha=None):
        if alpha is not None:
            poly = poly.specialize(parameter_values(alpha))
        self.coef, _, self.exps = _term_table({0: poly})

    def __call__(self, t, u) -> float:
        vals = np.append(np.asarray(u, dtype=np.float64), float(t))
        return float(np.sum(self.coef * np.prod(vals ** self.exps, axis=1))) if len(self.coef) else 0.0


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray  # shape (n, 6)
    nsteps: int
    nrejected: int
    max_err: float
    status: str  # "ok", "blowup" or "max_steps"
    blowup_t: float | None = None

    @property
    def blowup(self) -> bool:
        return self.status == "blowup"

    @property
    def final(self):
        return float(self.t[-1]), self.y[-1].copy()

    def column(self, name: str) -> np.ndarray:
        return self.y[:, U.index(name)]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(CSV_HEADER)
            for tv, row in zip(self.t, self.y):
                wr.writerow([format(float(tv), ".16e")] + [format(float(v), ".16e") for v in row])

    def summary(self) -> dict:
        tf, yf = self.final
        return {
            "status": self.status,
            "blowup": self.blowup,
            "blowup_t": self.blowup_t,
            "steps": self.nsteps,
            "rejected": self.nrejected,
            "max_err": self.max_err,
            "samples": len(self.t),
            "final_t": tf,
            "final_state": dict(zip(U.PHASE_NAMES, (float(v) for v in yf))),
        }


_STATUS = {0: "ok", 1: "blowup", 2: "max_steps"}


def integrate(
    field: CompiledField,
    y0,
    t0: float,
    t1: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    t_eval=None,
    h0: float | None = None,
    blowup: float = BLOWUP_NORM,
    min_step: float = MIN_STEP,
    max_steps: int = MAX_STEPS,
) -> Trajectory:
    """Adaptive integration on a real interval that avoids ``t = 0``.

    Blow-up (norm above ``blowup`` or the step shrinking below ``min_step``)
    is a normal outcome, reported through ``status`` and ``blowup_t``.
    """
    t0, t1 = float(t0), float(t1)
    if t0 == 0 or t1 == 0 or (t0 > 0) != (t1 > 0):
        raise ValueError("t0 and t1 must be nonzero with the same sign")
    if not (rel_tol > 0 and abs_tol > 0):
        raise ValueError("tolerances must be positive")
    y0 = np.ascontiguousarray(y0, dtype=np.float64)
    if y0.shape != (6,):
        raise ValueError("initial state needs six components")
    if t_eval is None:
        te = np.zeros(0)
    else:
        te = np.ascontiguousarray(t_eval, dtype=np.float64)
        d = np.diff(te) * (1 if t1 >= t0 else -1)
        if np.any(d <= 0):
            raise ValueError("t_eval must be strictly monotone in the direction of integration")
    if h0 is None:
        h0 = min(abs(t1 - t0), 1e-3) if t1 != t0 else 1e-3
    ts, ys, n, nrej, merr, status, tstop = _k.dopri5(
        field.coef, field.comp, field.exps, y0, t0, t1, rel_tol, abs_tol, h0, blowup, min_step, max_steps, te
    )
    st = _STATUS[int(status)]
    return Trajectory(np.asarray(ts), np.asarray(ys), int(n), int(nrej), float(merr), st, float(tstop) if st == "blowup" else None)
