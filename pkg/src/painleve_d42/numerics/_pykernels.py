"""Pure-Python twin of the compiled kernels; same signatures and results."""
from __future__ import annotations

import math

import numpy as np

NPHASE = 6

# Dormand-Prince 5(4) tableau
A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0)
B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def _terms(coef, comp, exps):
    return [
        (float(c), int(k), [(j, int(e)) for j, e in enumerate(row) if e])
        for c, k, row in zip(coef, comp, exps)
    ]


def _eval(terms, t, u):
    vals = list(u) + [t]
    out = [0.0] * NPHASE
    for c, k, factors in terms:
        for j, e in factors:
            c *= vals[j] ** e
        out[k] += c
    return out


def eval_field(coef, comp, exps, t, u):
    return np.array(_eval(_terms(coef, comp, exps), float(t), [float(v) for v in u]))


def dopri5(coef, comp, exps, y0, t0, t1, rtol, atol, h0, blowup, hmin, max_steps, t_eval):
    terms = _terms(coef, comp, exps)
    t = float(t0)
    direction = 1.0 if t1 >= t0 else -1.0
    y = [float(v) for v in y0]
    t_eval = [float(v) for v in t_eval]
    use_eval = bool(t_eval)
    ie = 0
    ts, ys = [], []
    if not use_eval:
        ts.append(t)
        ys.append(list(y))
    else:
        while ie < len(t_eval) and (t_eval[ie] - t) * direction <= 0.0:
            ts.append(t_eval[ie])
            ys.append(list(y))
            ie += 1
    nsteps = nrej = status = 0
    max_err = 0.0
    h = abs(h0)
    k1 = _eval(terms, t, y)
    while (t1 - t) * direction > 0.0:
        if nsteps >= max_steps:
            status = 2
            break
        if h < hmin:
            status = 1
            break
        target = t1
        if use_eval and ie < len(t_eval) and (t_eval[ie] - t1) * direction < 0.0:
            target = t_eval[ie]
        if h >= abs(target - t):
            h = abs(target - t)
        sc = h * direction
        ks = [k1]
        for s in range(1, 6):
            tmp = [y[j] + sc * sum(a * ks[i][j] for i, a in enumerate(A[s])) for j in range(NPHASE)]
            ks.append(_eval(terms, t + sc * C[s], tmp))
        ynew = [y[j] + sc * sum(b * ks[i][j] for i, b in enumerate(B)) for j in range(NPHASE)]
        k7 = _eval(terms, t + sc, ynew)
        ks.append(k7)
        err = 0.0
        for j in range(NPHASE):
            fac = atol + rtol * max(abs(y[j]), abs(ynew[j]))
            nrm = sc * sum(e * ks[i][j] for i, e in enumerate(E)) / fac
            err += nrm * nrm
        err = math.sqrt(err / NPHASE)
        if not math.isfinite(err):
            h *= 0.2
            nrej += 1
            continue
        if err <= 1.0:
            nsteps += 1
            max_err = max(max_err, err)
            t = target if h == abs(target - t) else t + sc
            y = ynew
            k1 = k7
            if use_eval:
                if ie < len(t_eval) and t == t_eval[ie]:
                    ts.append(t)
                    ys.append(list(y))
                    ie += 1
            else:
                ts.append(t)
                ys.append(list(y))
            if math.sqrt(sum(v * v for v in y)) > blowup:
                status = 1
                break
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err**-0.2))
            h *= fac
        else:
            nrej += 1
            h *= max(0.2, 0.9 * err**-0.2)
    return np.array(ts), np.array(ys).reshape(-1, NPHASE), nsteps, nrej, max_err, status, t
