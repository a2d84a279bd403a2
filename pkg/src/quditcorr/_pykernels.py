"""Pure-Python CHSH kernels, used when the compiled extension is unavailable.

Angle vectors hold four (phi, theta, psi) triples for u_a, u_b, u_c, u_d.
``pairs`` is a (4, 2) integer array: row j names the two factors of u_j.
``sign`` is the 4x4 CHSH sign matrix; ``B = sum_j sum_n sign[j, n] w_n(u_j)``.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _su2_stack(x: np.ndarray) -> np.ndarray:
    """(..., 3) Euler angles -> (..., 2, 2) matrices, z-y-z with half angles."""
    phi, theta, psi = x[..., 0], x[..., 1], x[..., 2]
    c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
    ep = np.exp(-0.5j * (phi + psi))
    em = np.exp(-0.5j * (phi - psi))
    u = np.empty(x.shape[:-1] + (2, 2), dtype=complex)
    u[..., 0, 0] = ep * c
    u[..., 0, 1] = -em * s
    u[..., 1, 0] = em.conj() * s
    u[..., 1, 1] = ep.conj() * c
    return u


def chsh_batch(rho, X, pairs, sign) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    X = np.asarray(X, dtype=float).reshape(-1, 12)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(4, 2)
    sign = np.asarray(sign, dtype=float).reshape(4, 4)
    us = _su2_stack(X.reshape(-1, 4, 3))
    total = np.zeros(X.shape[0])
    for j in range(4):
        a, b = us[:, pairs[j, 0]], us[:, pairs[j, 1]]
        U = np.einsum("nac,nbd->nabcd", a, b).reshape(-1, 4, 4)
        w = np.einsum("nik,kl,nil->ni", U, rho, U.conj()).real
        total += w @ sign[j]
    return total


def chsh_angles(rho, x, pairs, sign) -> float:
    return float(chsh_batch(rho, np.asarray(x, dtype=float)[None, :], pairs, sign)[0])


def nelder_mead(rho, x0, pairs, sign, step=0.5, max_evals=2000, xtol=1e-8):
    """Maximize ``|B|`` from ``x0``; returns ``(x_best, |B|_best, evaluations)``."""
    rho = np.asarray(rho, dtype=complex)

    def f(x):
        return -abs(chsh_angles(rho, x, pairs, sign))

    x0 = np.asarray(x0, dtype=float)
    d = x0.size
    sim = np.tile(x0, (d + 1, 1))
    sim[1:] += step * np.eye(d)
    fs = np.array([f(v) for v in sim])
    nev = d + 1
    while True:
        order = np.argsort(fs, kind="stable")
        sim, fs = sim[order], fs[order]
        if nev >= max_evals or np.max(np.abs(sim[1:] - sim[0])) <= xtol:
            break
        c = sim[:-1].sum(axis=0) / d
        xr = c + (c - sim[-1])
        fr = f(xr)
        nev += 1
        if fr < fs[0]:
            xe = c + 2.0 * (xr - c)
            fe = f(xe)
            nev += 1
            if fe < fr:
                sim[-1], fs[-1] = xe, fe
            else:
                sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-2]:
            sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-1]:
            xc = c + 0.5 * (xr - c)
            fc = f(xc)
            nev += 1
            if fc <= fr:
                sim[-1], fs[-1] = xc, fc
                continue
        else:
            xc = c + 0.5 * (sim[-1] - c)
            fc = f(xc)
            nev += 1
            if fc < fs[-1]:
                sim[-1], fs[-1] = xc, fc
                continue
        for i in range(1, d + 1):
            sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
            fs[i] = f(sim[i])
            nev += 1
    return sim[0].copy(), float(-fs[0]), nev
