# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled vector-field evaluation and Dormand-Prince 5(4) stepping.

A field is a flat term list: term k adds ``coef[k] * prod_j u_j**exps[k, j]``
to component ``comp[k]``, with u = (x, y, z, w, q, p, t). Exponents are
small, so powers come from a table built once per evaluation.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, pow, isfinite

cnp.import_array()

cdef enum:
    NV = 7
    NPHASE = 6
    MAXP = 8

cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0, A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0, B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0, E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0


cdef void _eval(const double[::1] coef, const long[::1] comp, const long[:, ::1] exps,
                double t, const double* u, double* out) noexcept nogil:
    cdef double pw[NV][2 * MAXP + 1]
    cdef int j, e
    cdef Py_ssize_t k, n = coef.shape[0]
    cdef double v, term
    for j in range(NV):
        v = u[j] if j < NPHASE else t
        pw[j][MAXP] = 1.0
        for e in range(1, MAXP + 1):
            pw[j][MAXP + e] = pw[j][MAXP + e - 1] * v
        # negative powers are only ever used for t, which is nonzero
        if j == NPHASE:
            for e in range(1, MAXP + 1):
                pw[j][MAXP - e] = pw[j][MAXP - e + 1] / v
        else:
            for e in range(1, MAXP + 1):
                pw[j][MAXP - e] = 0.0
    for j in range(NPHASE):
        out[j] = 0.0
    for k in range(n):
        term = coef[k]
        for j in range(NV):
            e = exps[k, j]
            if e:
                term *= pw[j][MAXP + e]
        out[comp[k]] += term


def eval_field(double[::1] coef, long[::1] comp, long[:, ::1] exps, double t, double[::1] u):
    cdef double[NPHASE] out
    _eval(coef, comp, exps, t, &u[0], out)
    return np.array([out[j] for j in range(NPHASE)])


def dopri5(double[::1] coef, long[::1] comp, long[:, ::1] exps, double[::1] y0,
           double t0, double t1, double rtol, double atol, double h0,
           double blowup, double hmin, long max_steps, double[::1] t_eval):
    """Integrate from t0 to t1; returns (ts, ys, nsteps, nrejected, max_err, status, t_stop).

    Samples are taken at every accepted step, or only at ``t_eval`` points
    (which the stepper hits exactly) when that array is nonempty.
    status: 0 finished, 1 blow-up (norm bound or step underflow), 2 step limit.
    """
    cdef double[NPHASE] y, ynew, k1, k2, k3, k4, k5, k6, k7, tmp
    cdef double t = t0, h, hnext, err, sc, fac, nrm, max_err = 0.0, target
    cdef double direction = 1.0 if t1 >= t0 else -1.0
    cdef long nsteps = 0, nrej = 0, status = 0
    cdef Py_ssize_t j, ie = 0, ne = t_eval.shape[0]
    cdef bint use_eval = ne > 0
    ts = []
    ys = []
    for j in range(NPHASE):
        y[j] = y0[j]
    if not use_eval:
        ts.append(t)
        ys.append([y[j] for j in range(NPHASE)])
    else:
        while ie < ne and (t_eval[ie] - t) * direction <= 0.0:
            ts.append(t_eval[ie])
            ys.append([y[j] for j in range(NPHASE)])
            ie += 1
    h = fabs(h0)
    _eval(coef, comp, exps, t, y, k1)
    while (t1 - t) * direction > 0.0:
        if nsteps >= max_steps:
            status = 2
            break
        if h < hmin:
            status = 1
            break
        target = t1
        if use_eval and ie < ne and (t_eval[ie] - t1) * direction < 0.0:
            target = t_eval[ie]
        if h >= fabs(target - t):
            h = fabs(target - t)
        sc = h * direction
        for j in range(NPHASE):
            tmp[j] = y[j] + sc * A21 * k1[j]
        _eval(coef, comp, exps, t + sc / 5.0, tmp, k2)
        for j in range(NPHASE):
            tmp[j] = y[j] + sc * (A31 * k1[j] + A32 * k2[j])
        _eval(coef, comp, exps, t + sc * 3.0 / 10.0, tmp, k3)
        for j in range(NPHASE):
            tmp[j] = y[j] + sc * (A41 * k1[j] + A42 * k2[j] + A43 * k3[j])
        _eval(coef, comp, exps, t + sc * 4.0 / 5.0, tmp, k4)
        for j in range(NPHASE):
            tmp[j] = y[j] + sc * (A51 * k1[j] + A52 * k2[j] + A53 * k3[j] + A54 * k4[j])
        _eval(coef, comp, exps, t + sc * 8.0 / 9.0, tmp, k5)
        for j in range(NPHASE):
            tmp[j] = y[j] + sc * (A61 * k1[j] + A62 * k2[j] + A63 * k3[j] + A64 * k4[j] + A65 * k5[j])
        _eval(coef, comp, exps, t + sc, tmp, k6)
        for j in range(NPHASE):
            ynew[j] = y[j] + sc * (B1 * k1[j] + B3 * k3[j] + B4 * k4[j] + B5 * k5[j] + B6 * k6[j])
        _eval(coef, comp, exps, t + sc, ynew, k7)
        err = 0.0
        for j in range(NPHASE):
            fac = atol + rtol * max(fabs(y[j]), fabs(ynew[j]))
            nrm = sc * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j] + E6 * k6[j] + E7 * k7[j]) / fac
            err += nrm * nrm
        err = sqrt(err / NPHASE)
        if not isfinite(err):
            h *= 0.2
            nrej += 1
            continue
        if err <= 1.0:
            nsteps += 1
            if err > max_err:
                max_err = err
            if h == fabs(target - t):
                t = target
            else:
                t = t + sc
            nrm = 0.0
            for j in range(NPHASE):
                y[j] = ynew[j]
                k1[j] = k7[j]
                nrm += y[j] * y[j]
            if use_eval:
                if ie < ne and t == t_eval[ie]:
                    ts.append(t)
                    ys.append([y[j] for j in range(NPHASE)])
                    ie += 1
            else:
                ts.append(t)
                ys.append([y[j] for j in range(NPHASE)])
            if sqrt(nrm) > blowup:
                status = 1
                break
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
            h = h * fac
        else:
            nrej += 1
            h = h * max(0.2, 0.9 * pow(err, -0.2))
    return np.array(ts), np.array(ys).reshape(-1, NPHASE), nsteps, nrej, max_err, status, t
