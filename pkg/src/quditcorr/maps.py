"""Positive maps on vectorized matrices and portrait reductions of a single qudit.

A map ``a -> sum_s P_s a P_s^+`` acts on the row-major vector of ``a`` as the
``n^2 x n^2`` matrix ``sum_s P_s (x) conj(P_s)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    PSD_TOL,
    DimensionError,
    SeedLike,
    as_matrix,
    devectorize,
    is_hermitian,
    matrix_digest,
    random_density,
    rng_from,
    validate_density,
    vectorize,
)
from .report import InequalityReport

LABELS = ("M1", "M2", "M1_tilde", "M2_tilde", "generic")


@dataclass(frozen=True)
class MapMatrix:
    matrix: np.ndarray
    label: str = "generic"

    def __post_init__(self):
        m = as_matrix(self.matrix)
        n = int(round(np.sqrt(m.shape[0])))
        if m.shape[0] != m.shape[1] or n * n != m.shape[0]:
            raise DimensionError(f"map matrix must be N x N with N a square, got {m.shape}")
        if self.label not in LABELS:
            raise ValueError(f"unknown map label {self.label!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def N(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return int(round(np.sqrt(self.N)))

    def is_diagonal(self) -> bool:
        m = self.matrix
        return bool(np.all(m[~np.eye(self.N, dtype=bool)] == 0))

    def __call__(self, a) -> np.ndarray:
        return apply_map(self, a)


def is_projector(p, tol: float = 1e-12) -> bool:
    p = as_matrix(p)
    return is_hermitian(p, tol) and float(np.max(np.abs(p @ p - p))) <= tol


def build_projector_map(ps: Sequence, label: str = "generic") -> MapMatrix:
    mats = [as_matrix(p) for p in ps]
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].shape[0]
    for p in mats:
        if p.shape != (n, n):
            raise DimensionError("all P_s must be square and of the same size")
    L = sum(np.kron(p, p.conj()) for p in mats)
    return MapMatrix(L, label)


def _last_projector(n: int) -> np.ndarray:
    p = np.zeros((n, n), dtype=complex)
    p[n - 1, n - 1] = 1
    return p


def m2_zero_indices(n: int) -> list[int]:
    """1-based indices J with f(J) = 0: J = n, 2n, ..., (n-1)n and n^2-n+1, ..., n^2-1."""
    return sorted(set(range(n, (n - 1) * n + 1, n)) | set(range(n * n - n + 1, n * n)))


def m2_matrix(n: int) -> MapMatrix:
    """Diagonal 0/1 matrix of ``a -> P_{n-1} a P_{n-1} + P_n a P_n``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    f = np.ones(n * n)
    f[np.array(m2_zero_indices(n)) - 1] = 0
    return MapMatrix(np.diag(f).astype(complex), "M2")


def m1_matrix(n: int) -> MapMatrix:
    """Dephasing between odd- and even-indexed levels; block diag(Pi1, Pi2, Pi1) at n = 3."""
    if n < 2:
        raise ValueError("n must be >= 2")
    odd = np.diag([1.0 if j % 2 == 0 else 0.0 for j in range(n)])
    return MapMatrix(build_projector_map([odd, np.eye(n) - odd]).matrix, "M1")


def m2_tilde_matrix(n: int) -> MapMatrix:
    """``M2 + S1 - P`` with ``(S1)_{1N} = P_{NN} = 1``: moves a_nn onto a_11."""
    if n < 2:
        raise ValueError("n must be >= 2")
    m = np.array(m2_matrix(n).matrix)
    N = n * n
    m[0, N - 1] += 1
    m[N - 1, N - 1] -= 1
    return MapMatrix(m, "M2_tilde")


def m1_tilde_matrix(n: int = 3) -> MapMatrix:
    """The 9x9 block matrix ``[[A, B, 0], [0, 0, A], [0, 0, 0]]``; only defined for n = 3."""
    if n != 3:
        raise ValueError("M1_tilde is only defined for n = 3")
    A = np.array([[1, 0, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
    B = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=complex)
    Z = np.zeros((3, 3), dtype=complex)
    return MapMatrix(np.block([[A, B, Z], [Z, Z, A], [Z, Z, Z]]), "M1_tilde")


MAP_BUILDERS = {
    "m1": m1_matrix,
    "m2": m2_matrix,
    "m1t": m1_tilde_matrix,
    "m2t": m2_tilde_matrix,
}


def apply_map(L: MapMatrix, a) -> np.ndarray:
    m = as_matrix(a)
    n = m.shape[0]
    if m.shape != (n, n) or L.N != n * n:
        raise DimensionError(f"map of size {L.N} cannot act on a {m.shape} matrix")
    return devectorize(L.matrix @ vectorize(m), n, n)


def portrait_qubit(a) -> np.ndarray:
    """``[[a11 + ... + a_{n-1,n-1}, a_1n], [a_n1, a_nn]]``."""
    m = validate_density(a)
    n = m.shape[0]
    if n < 2:
        raise ValueError("portrait_qubit needs n >= 2")
    out = np.array(
        [[np.trace(m[: n - 1, : n - 1]), m[0, n - 1]], [m[n - 1, 0], m[n - 1, n - 1]]],
        dtype=complex,
    )
    return validate_density(out)


def portrait_reduce(a) -> np.ndarray:
    """Leading (n-1)x(n-1) block of ``a`` with ``a_nn`` added to the (1,1) entry."""
    m = validate_density(a)
    n = m.shape[0]
    if n < 3:
        raise ValueError("portrait_reduce needs n >= 3")
    out = m[: n - 1, : n - 1].copy()
    out[0, 0] += m[n - 1, n - 1]
    return validate_density(out)


def is_positive_map_on_sample(
    L: MapMatrix,
    trials: int = 100,
    rng_seed: SeedLike = 0,
    tol: float = PSD_TOL,
) -> InequalityReport:
    """Apply ``L`` to random densities; lhs is the smallest output eigenvalue."""
    rng = rng_from(rng_seed)
    min_eig = np.inf
    trace_dev = 0.0
    herm_dev = 0.0
    for _ in range(trials):
        out = apply_map(L, random_density(L.n, rng))
        herm_dev = max(herm_dev, float(np.max(np.abs(out - out.conj().T))))
        trace_dev = max(trace_dev, abs(np.trace(out) - 1.0))
        min_eig = min(min_eig, float(np.linalg.eigvalsh(0.5 * (out + out.conj().T))[0]))
    rep = InequalityReport(
        name=f"positive_map[{L.label}]",
        lhs=min_eig,
        rhs=0.0,
        tolerance=tol,
        digest=matrix_digest(L.matrix),
        extra={"trials": trials, "trace_deviation": trace_dev, "hermiticity_deviation": herm_dev},
    )
    if trace_dev > tol or herm_dev > tol:
        # trace or hermiticity loss counts as failure even if the spectrum looks fine
        rep.lhs = min(rep.lhs, -max(trace_dev, herm_dev))
    return rep
