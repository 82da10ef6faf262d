"""The fixed variable ordering shared by every polynomial.

Indices 0..12 are the named block (phase, time, parameters, integration
constants). Index ``12 + m`` is the ansatz unknown ``a{m}`` for ``m >= 1``,
so the unknown block extends without any mutable registry.
"""
from __future__ import annotations

import re

PHASE_NAMES = ("x", "y", "z", "w", "q", "p")
BASE_NAMES = PHASE_NAMES + ("t", "alpha0", "alpha1", "alpha2", "alpha3", "C1", "C2")

X, Y, Z, W, QV, P = range(6)
T = 6
A0, A1, A2, A3 = 7, 8, 9, 10
C1, C2 = 11, 12
PHASE = (X, Y, Z, W, QV, P)
ALPHAS = (A0, A1, A2, A3)
N_BASE = len(BASE_NAMES)

_INDEX = {name: i for i, name in enumerate(BASE_NAMES)}
_UNKNOWN = re.compile(r"a(\d+)$")


def unknown(m: int) -> int:
    """Index of the ansatz unknown ``a{m}``."""
    if m < 1:
        raise ValueError("ansatz unknowns are numbered from 1")
    return N_BASE - 1 + m


def index(var) -> int:
    if isinstance(var, int):
        if var < 0:
            raise ValueError(f"negative variable index {var}")
        return var
    try:
        return _INDEX[var]
    except KeyError:
        pass
    m = _UNKNOWN.match(var)
    if m and int(m.group(1)) >= 1:
        return unknown(int(m.group(1)))
    raise KeyError(f"unknown variable {var!r}")


def name(i: int) -> str:
    if i < N_BASE:
        return BASE_NAMES[i]
    return f"a{i - N_BASE + 1}"
