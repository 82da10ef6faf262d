"""Compare the compiled kernels with the pure-Python fallback.

Numeric kernels are timed in-process (both modules are importable side by
side). The exact-arithmetic hot path is timed in subprocesses, because the
scalar backend (gmpy2 vs fractions) is fixed at import time.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from painleve_d42.hamiltonian import build_H
from painleve_d42.numerics import _pykernels
from painleve_d42.numerics.core import CompiledField

try:
    from painleve_d42.numerics import _kernels
except ImportError:
    _kernels = None



def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_numeric(repeat):
    from painleve_d42.algebra.scalar import Q

    alpha = [Q(3, 10), Q(1, 7), Q(1, 5), 1 - Q(3, 10) - Q(1, 7) - Q(1, 5)]
    f = CompiledField(build_H(), alpha)
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1, 1, size=(2000, 6))
    y0 = np.array([0.1, 0.2, -0.1, 0.3, 0.2, -0.2])
    rows = []
    mods = [("python", _pykernels)] + ([("compiled", _kernels)] if _kernels else [])
    for name, mod in mods:
        ev = best_of(lambda: [mod.eval_field(f.coef, f.comp, f.exps, 1.3, p) for p in pts], repeat)
        de = best_of(
            lambda: mod.dopri5(f.coef, f.comp, f.exps, y0, 1.0, 1.7, 1e-10, 1e-12, 1e-3, 1e8, 1e-12, 10**6, np.zeros(0)),
            repeat,
        )
        rows.append((name, ev, de))
    print("numeric kernels (best of %d)" % repeat)
    print(f"  {'backend':10s} {'2000 field evals':>18s} {'dopri5 on [1,1.7]':>20s}")
    for name, ev, de in rows:
        print(f"  {name:10s} {ev * 1e3:15.2f} ms {de * 1e3:17.2f} ms")
    if len(rows) == 2:
        print(f"  speedup    {rows[0][1] / rows[1][1]:15.1f} x {rows[0][2] / rows[1][2]:17.1f} x")


EXACT_SNIPPET = """
import time
from painleve_d42.algebra import BACKEND
from painleve_d42.hamiltonian import build_H
from painleve_d42.weyl import generator, is_backlund_symmetry, weyl_relation_order
from painleve_d42.holomorphy import ansatz_solve
t0 = time.perf_counter(); is_backlund_symmetry(generator(2), build_H()); a = time.perf_counter() - t0
t0 = time.perf_counter(); weyl_relation_order(2, 3, 20); b = time.perf_counter() - t0
t0 = time.perf_counter(); ansatz_solve(seed=1); c = time.perf_counter() - t0
print(BACKEND, a, b, c)
"""


def bench_exact():
    print("exact arithmetic (fresh process per backend)")
    print(f"  {'scalars':10s} {'s2 symmetry':>14s} {'order(s2 s3)':>14s} {'ansatz solve':>14s}")
    for forced in (False, True):
        env = dict(os.environ)
        env.pop("PD42_PURE_PYTHON", None)
        if forced:
            env["PD42_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", EXACT_SNIPPET], env=env, capture_output=True, text=True, check=True)
        name, *ts = out.stdout.split()
        print(f"  {name:10s} " + " ".join(f"{float(v):11.2f} s " for v in ts))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    bench_numeric(args.repeat)
    bench_exact()


if __name__ == "__main__":
    main()
