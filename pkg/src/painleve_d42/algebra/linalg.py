"""Exact sparse linear algebra over Q.

Rows are dicts ``{column: scalar}``. Elimination is fraction-free: every row
is scaled to coprime integers and reduced by cross-multiplication against
pivot rows, then divided by its content. Rows with fewer terms are used as
pivots first, which keeps fill-in and integer growth down.
"""
from __future__ import annotations

import math

from ..errors import InconsistentSystem
from .scalar import Q, gcd_many, lcm_many


def _integral(row: dict) -> dict:
    if not row:
        return row
    m = lcm_many(c.denominator for c in row.values())
    out = {k: int(c * m) for k, c in row.items()}
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = gcd_many(row.values())
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        return {k: v // g for k, v in row.items()}
    return row


def echelon(rows, protect=None):
    """Reduce ``rows`` to an echelon basis ``{pivot column: integer row}``.

    Pivot columns are each row's smallest column. ``protect`` is a column
    that may never serve as a pivot for reduction (the right-hand side); a
    row whose only entry is that column is returned as a contradiction.
    """
    basis: dict = {}
    contradiction = None
    for row in sorted((_integral(dict(r)) for r in rows if r), key=len):
        row = dict(row)
        while row:
            cols = [c for c in row if c in basis]
            if not cols:
                break
            c = min(cols)
            prow = basis[c]
            a, b = prow[c], row[c]
            g = math.gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: v * fa for k, v in row.items()}
            for k, v in prow.items():
                nv = new.get(k, 0) - fb * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row = _primitive(new) if new else new
        if not row:
            continue
        piv = min(row)
        if protect is not None and piv == protect:
            contradiction = row
            continue
        basis[piv] = row
    return basis, contradiction


def _back_substitute(basis: dict) -> dict:
    """Turn an echelon basis into reduced form (pivots cleared above)."""
    pivots = sorted(basis, reverse=True)
    red = {}
    for pc in pivots:
        row = dict(basis[pc])
        for c in [k for k in row if k != pc and k in red]:
            prow = red[c]
            a, b = prow[c], row[c]
            g = math.gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: v * fa for k, v in row.items()}
            for k, v in prow.items():
                nv = new.get(k, 0) - fb * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row = _primitive(new)
        red[pc] = row
    return red


def nullspace(rows, ncols: int):
    """Basis of ``{v : A v = 0}`` as a list of dense Q lists."""
    basis, _ = echelon(rows)
    red = _back_substitute(basis)
    free = [c for c in range(ncols) if c not in red]
    vectors = []
    for f in free:
        v = [Q(0)] * ncols
        v[f] = Q(1)
        for pc, row in red.items():
            if f in row:
                v[pc] = -Q(row[f], row[pc])
        vectors.append(v)
    return vectors


def rank(rows) -> int:
    basis, _ = echelon(rows)
    return len(basis)


def solve_affine(rows, rhs, ncols: int):
    """Solve ``A v = b``; returns (particular solution, nullspace basis).

    ``rows[k]`` is row k of A and ``rhs[k]`` its right-hand side.
    """
    aug = []
    for r, b in zip(rows, rhs):
        row = {k: v for k, v in r.items() if v}
        if b:
            row[ncols] = Q(b)
        aug.append(row)
    basis, contradiction = echelon(aug, protect=ncols)
    if contradiction is not None:
        raise InconsistentSystem("linear system has no solution")
    red = _back_substitute(basis)
    part = [Q(0)] * ncols
    for pc, row in red.items():
        if ncols in row:
            part[pc] = Q(row[ncols], row[pc])
    free = [c for c in range(ncols) if c not in red]
    null = []
    for f in free:
        v = [Q(0)] * ncols
        v[f] = Q(1)
        for pc, row in red.items():
            if f in row:
                v[pc] = -Q(row[f], row[pc])
        null.append(v)
    return part, null


def mat_vec(rows, vec) -> list:
    return [sum((c * vec[k] for k, c in r.items()), Q(0)) for r in rows]


def in_span(vectors, target) -> bool:
    """Whether ``target`` lies in the Q-span of ``vectors`` (dense lists)."""
    base = [{i: c for i, c in enumerate(v) if c} for v in vectors]
    aug = base + [{i: c for i, c in enumerate(target) if c}]
    return rank(aug) == rank(base)
