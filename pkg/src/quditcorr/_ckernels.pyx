# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled CHSH kernels; same contract as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, fabs

cnp.import_array()

ctypedef double complex cplx

BACKEND = "cython"


cdef inline void _su2(const double* a, cplx* u) noexcept nogil:
    cdef double c = cos(0.5 * a[1])
    cdef double s = sin(0.5 * a[1])
    cdef double hp = 0.5 * (a[0] + a[2])
    cdef double hm = 0.5 * (a[0] - a[2])
    cdef cplx ep = cos(hp) - 1j * sin(hp)
    cdef cplx em = cos(hm) - 1j * sin(hm)
    u[0] = ep * c
    u[1] = -em * s
    u[2] = em.conjugate() * s
    u[3] = ep.conjugate() * c


cdef double _chsh(const cplx* rho, const double* x, const long long* pairs,
                  const double* sign) noexcept nogil:
    cdef cplx ua[4]
    cdef cplx ub[4]
    cdef cplx U[16]
    cdef cplx acc
    cdef double total = 0.0
    cdef double w
    cdef int j, n, k, l, a1, a2, b1, b2
    for j in range(4):
        _su2(x + 3 * pairs[2 * j], ua)
        _su2(x + 3 * pairs[2 * j + 1], ub)
        for a1 in range(2):
            for b1 in range(2):
                for a2 in range(2):
                    for b2 in range(2):
                        U[(2 * a1 + b1) * 4 + 2 * a2 + b2] = ua[2 * a1 + a2] * ub[2 * b1 + b2]
        for n in range(4):
            w = 0.0
            for k in range(4):
                acc = 0.0
                for l in range(4):
                    acc = acc + rho[4 * k + l] * U[4 * n + l].conjugate()
                w += (U[4 * n + k] * acc).real
            total += sign[4 * j + n] * w
    return total


def _prep(rho, pairs, sign):
    r = np.ascontiguousarray(rho, dtype=np.complex128).reshape(16)
    p = np.ascontiguousarray(pairs, dtype=np.int64).reshape(8)
    s = np.ascontiguousarray(sign, dtype=np.float64).reshape(16)
    return r, p, s


def chsh_angles(rho, x, pairs, sign):
    r, p, s = _prep(rho, pairs, sign)
    cdef cplx[::1] rv = r
    cdef long long[::1] pv = p
    cdef double[::1] sv = s
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).reshape(12)
    return _chsh(&rv[0], &xv[0], &pv[0], &sv[0])


def chsh_batch(rho, X, pairs, sign):
    r, p, s = _prep(rho, pairs, sign)
    cdef cplx[::1] rv = r
    cdef long long[::1] pv = p
    cdef double[::1] sv = s
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64).reshape(-1, 12)
    cdef Py_ssize_t m = Xv.shape[0]
    out = np.empty(m)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            ov[i] = _chsh(&rv[0], &Xv[i, 0], &pv[0], &sv[0])
    return out


cdef inline double _obj(const cplx* rho, const double* x, const long long* pairs,
                        const double* sign) noexcept nogil:
    return -fabs(_chsh(rho, x, pairs, sign))


def nelder_mead(rho, x0, pairs, sign, double step=0.5, long max_evals=2000, double xtol=1e-8):
    """Maximize ``|B|`` from ``x0``; returns ``(x_best, |B|_best, evaluations)``."""
    r, p, s = _prep(rho, pairs, sign)
    cdef cplx[::1] rv = r
    cdef long long[::1] pv = p
    cdef double[::1] sv = s
    cdef double[::1] start = np.ascontiguousarray(x0, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t d = start.shape[0]
    sim_a = np.empty((d + 1, d))
    fs_a = np.empty(d + 1)
    tmp_a = np.empty((d + 1, d))
    tfs_a = np.empty(d + 1)
    order_a = np.empty(d + 1, dtype=np.intp)
    work_a = np.empty((4, d))
    cdef double[:, ::1] sim = sim_a
    cdef double[::1] fs = fs_a
    cdef double[:, ::1] tmp = tmp_a
    cdef double[::1] tfs = tfs_a
    cdef Py_ssize_t[::1] order = order_a
    cdef double[:, ::1] work = work_a
    cdef double[::1] c = work[0]
    cdef double[::1] xr = work[1]
    cdef double[::1] xe = work[2]
    cdef double[::1] xc = work[3]
    cdef Py_ssize_t i, k, jj, key
    cdef long nev
    cdef double fr, fe, fc, diam, v
    cdef const cplx* rp = &rv[0]
    cdef const long long* pp = &pv[0]
    cdef const double* sp = &sv[0]

    with nogil:
        for i in range(d + 1):
            for k in range(d):
                sim[i, k] = start[k]
            if i > 0:
                sim[i, i - 1] += step
            fs[i] = _obj(rp, &sim[i, 0], pp, sp)
        nev = d + 1
        while True:
            # stable insertion sort of vertices by objective
            for i in range(d + 1):
                order[i] = i
            for i in range(1, d + 1):
                key = order[i]
                jj = i - 1
                while jj >= 0 and fs[order[jj]] > fs[key]:
                    order[jj + 1] = order[jj]
                    jj -= 1
                order[jj + 1] = key
            for i in range(d + 1):
                tfs[i] = fs[order[i]]
                for k in range(d):
                    tmp[i, k] = sim[order[i], k]
            for i in range(d + 1):
                fs[i] = tfs[i]
                for k in range(d):
                    sim[i, k] = tmp[i, k]

            if nev >= max_evals:
                break
            diam = 0.0
            for i in range(1, d + 1):
                for k in range(d):
                    v = fabs(sim[i, k] - sim[0, k])
                    if v > diam:
                        diam = v
            if diam <= xtol:
                break

            for k in range(d):
                v = 0.0
                for i in range(d):
                    v += sim[i, k]
                c[k] = v / d
            for k in range(d):
                xr[k] = c[k] + (c[k] - sim[d, k])
            fr = _obj(rp, &xr[0], pp, sp)
            nev += 1
            if fr < fs[0]:
                for k in range(d):
                    xe[k] = c[k] + 2.0 * (xr[k] - c[k])
                fe = _obj(rp, &xe[0], pp, sp)
                nev += 1
                if fe < fr:
                    for k in range(d):
                        sim[d, k] = xe[k]
                    fs[d] = fe
                else:
                    for k in range(d):
                        sim[d, k] = xr[k]
                    fs[d] = fr
                continue
            if fr < fs[d - 1]:
                for k in range(d):
                    sim[d, k] = xr[k]
                fs[d] = fr
                continue
            if fr < fs[d]:
                for k in range(d):
                    xc[k] = c[k] + 0.5 * (xr[k] - c[k])
                fc = _obj(rp, &xc[0], pp, sp)
                nev += 1
                if fc <= fr:
                    for k in range(d):
                        sim[d, k] = xc[k]
                    fs[d] = fc
                    continue
            else:
                for k in range(d):
                    xc[k] = c[k] + 0.5 * (sim[d, k] - c[k])
                fc = _obj(rp, &xc[0], pp, sp)
                nev += 1
                if fc < fs[d]:
                    for k in range(d):
                        sim[d, k] = xc[k]
                    fs[d] = fc
                    continue
            for i in range(1, d + 1):
                for k in range(d):
                    sim[i, k] = sim[0, k] + 0.5 * (sim[i, k] - sim[0, k])
                fs[i] = _obj(rp, &sim[i, 0], pp, sp)
                nev += 1

    return np.array(sim[0]), -fs[0], nev
