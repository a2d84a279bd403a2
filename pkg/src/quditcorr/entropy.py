"""Entropies, single-qudit subadditivity and relative-entropy monotonicity.

All entropies are in nats.  Deformed (Tsallis) variants replace ``ln`` with
``ln_q(x) = (x**(q-1) - 1)/(q-1)``.

Monotonicity reductions
-----------------------
Every 4x4 -> 2x2 reduction used here is a partial trace over the first qubit
taken after a simultaneous row/column permutation of the 4x4 matrix:

* ``ptrace``: identity permutation, ordinary ``Tr_1``.
* ``j32``: the spin-3/2 portrait with basis order (3/2, 1/2, -1/2, -3/2).
  As printed, its (1,2) entry reads ``rho_{3/2,1/2} + rho_{1/2,-3/2}``, which
  is not the conjugate of its (2,1) entry ``rho_{1/2,3/2} + rho_{-3/2,-1/2}``.
  We use ``rho_{3/2,1/2} + rho_{-1/2,-3/2}``, the Hermitian reading that makes
  the matrix a trace-preserving positive image of ``rho``.
* ``alt``: the non-partial-trace matrix ``rho'(2)``::

      [[r11 + r22, r14 + r23],
       [r41 + r32, r33 + r44]]

  (printed with a ``=1/2`` index in its (2,2) entry, read as ``-1/2``).
  It equals ``Tr_1`` after the permutation (1, 4, 2, 3), so it is always a
  density matrix.
* ``perm``: the ``j32`` pattern after an arbitrary permutation of the four
  indices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    EIG_FLOOR,
    DimensionError,
    InvalidDensityError,
    as_matrix,
    entropy_from_eigenvalues,
    hermitian_eig,
    ln_q,
    matrix_digest,
    matrix_ln,
    partial_trace,
    validate_density,
)
from .maps import apply_map, m1_matrix, m2_matrix, portrait_qubit, portrait_reduce
from .report import InequalityReport

SUBADD_TOL = 1e-10
MONO_TOL = 1e-9
DIAG_TOL = 1e-12
SUPPORT_WEIGHT_TOL = 1e-12


class SupportError(ValueError):
    """supp(rho) is not contained in supp(sigma)."""


def _check_q(q: float) -> None:
    if not q > 0:
        raise ValueError("q must be positive")


def deformed_entropy(rho, q: float = 1.0) -> float:
    _check_q(q)
    m = validate_density(rho)
    return entropy_from_eigenvalues(np.linalg.eigvalsh(m), q)


def von_neumann_entropy(rho) -> float:
    return deformed_entropy(rho, 1.0)


def relative_entropy(rho, sigma, q: float = 1.0) -> float:
    """``Tr rho (ln_q rho - ln_q sigma)``, or ``inf`` if supp(rho) is not inside supp(sigma)."""
    _check_q(q)
    r = validate_density(rho)
    s = validate_density(sigma)
    if r.shape != s.shape:
        raise DimensionError("rho and sigma must have the same size")
    pr, vr = np.linalg.eigh(r)
    ps, vs = np.linalg.eigh(s)
    pr = np.clip(pr, 0.0, None)
    # weight[i, j] = p_i |<r_i|s_j>|^2
    overlap = np.abs(vr.conj().T @ vs) ** 2
    weight_on_s = pr @ overlap
    null = ps <= EIG_FLOOR
    if np.any(weight_on_s[null] > SUPPORT_WEIGHT_TOL):
        return math.inf
    keep = pr > EIG_FLOOR
    first = float(np.sum(pr[keep] * ln_q(pr[keep], q)))
    second = float(np.sum(weight_on_s[~null] * ln_q(ps[~null], q)))
    return first - second


# -- single-qudit subadditivity -------------------------------------------------


def _subadditivity_parts(a: np.ndarray, variant: str) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    if variant == "raw":
        if n != 3:
            raise ValueError("raw-map variant is defined for qutrits (n = 3) only")
        return apply_map(m1_matrix(3), a), apply_map(m2_matrix(3), a)
    if variant == "portrait":
        if n < 3:
            raise ValueError("portrait variant needs n >= 3")
        return portrait_qubit(a), portrait_reduce(a)
    raise ValueError(f"unknown variant {variant!r}")


def _subadditivity_report(name: str, a, q: float, variant: str | None, tol: float) -> InequalityReport:
    _check_q(q)
    m = validate_density(a)
    if variant is None:
        variant = "raw" if m.shape[0] == 3 else "portrait"
    first, second = _subadditivity_parts(m, variant)
    s1 = deformed_entropy(first, q)
    s2 = deformed_entropy(second, q)
    s = deformed_entropy(m, q)
    return InequalityReport(
        name=f"{name}[{variant}]",
        lhs=s1 + s2,
        rhs=s,
        tolerance=tol,
        digest=matrix_digest(m),
        extra={"q": q, "n": m.shape[0], "S_first": s1, "S_second": s2},
    )


def check_subadditivity(a, q: float = 1.0, variant: str = "portrait", tol: float = SUBADD_TOL) -> InequalityReport:
    """``S(first) + S(second) >= S(a)`` for the two reductions of one qudit.

    ``variant="portrait"`` uses the 2x2 and (n-1)x(n-1) portraits (any n >= 3);
    ``variant="raw"`` uses the 3x3 outputs of the M1 and M2 maps (n = 3).
    """
    return _subadditivity_report("subadditivity", a, q, variant, tol)


def single_qudit_mutual_info(a, q: float = 1.0, variant: str | None = None, tol: float = SUBADD_TOL) -> InequalityReport:
    """Mutual-information analog; the report margin is ``I_q``.

    Defaults to the raw M1/M2 maps for a qutrit and to portraits otherwise.
    """
    return _subadditivity_report("mutual_info", a, q, variant, tol)


def _xlogx(x: float) -> float:
    return 0.0 if x <= 0.0 else x * math.log(x)


def diagonal_inequality(d: Sequence[float], tol: float = DIAG_TOL) -> InequalityReport:
    """``-(d1+d2)ln(d1+d2) - (d1+d3)ln(d1+d3) >= -d1 ln d1`` for a 3-outcome distribution."""
    p = np.asarray(d, dtype=float)
    if p.shape != (3,) or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("d must be a probability 3-vector")
    d1, d2, d3 = (float(x) for x in p)
    return InequalityReport(
        name="diagonal",
        lhs=-_xlogx(d1 + d2) - _xlogx(d1 + d3),
        rhs=-_xlogx(d1),
        tolerance=tol,
        digest=",".join(repr(x) for x in (d1, d2, d3)),
    )


# -- monotonicity ----------------------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    """``Tr_1`` over a ``dims`` factorization applied after a basis permutation.

    ``perm[i]`` is the old index placed at new position ``i``.
    """

    name: str
    perm: tuple[int, ...] | None = None
    dims: tuple[int, int] = (2, 2)

    def _permute(self, m: np.ndarray) -> np.ndarray:
        if self.perm is None:
            return m
        p = list(self.perm)
        return m[np.ix_(p, p)]

    def apply(self, rho) -> np.ndarray:
        m = as_matrix(rho)
        N = self.dims[0] * self.dims[1]
        if m.shape != (N, N):
            raise DimensionError(f"reduction {self.name} expects {N}x{N}, got {m.shape}")
        return partial_trace(self._permute(m), *self.dims, traced_subsystem=1)

    def lift(self, x) -> np.ndarray:
        """Embed a reduced operator back: ``P^T (1 (x) x) P``."""
        big = np.kron(np.eye(self.dims[0]), as_matrix(x))
        if self.perm is None:
            return big
        inv = np.argsort(self.perm)
        return big[np.ix_(inv, inv)]


J32_ORDER = (0, 1, 2, 3)
ALT_PERM = (0, 3, 1, 2)


def reduction(kind: str, perm: Sequence[int] | None = None, dims: tuple[int, int] = (2, 2)) -> Reduction:
    if kind == "ptrace":
        return Reduction("ptrace", None, tuple(dims))
    if kind == "j32":
        return Reduction("j32", J32_ORDER)
    if kind == "alt":
        return Reduction("alt", ALT_PERM)
    if kind == "perm":
        if perm is None:
            raise ValueError("perm reduction needs a permutation")
        p = tuple(int(i) for i in perm)
        if sorted(p) != [0, 1, 2, 3]:
            raise ValueError(f"{perm!r} is not a permutation of 0..3")
        return Reduction("perm" + "".join(str(i) for i in p), p)
    raise ValueError(f"unknown reduction {kind!r}")


def all_permutation_reductions() -> list[Reduction]:
    return [reduction("perm", p) for p in itertools.permutations(range(4))]


def alt_reduction(rho) -> np.ndarray:
    m = validate_density(rho)
    if m.shape != (4, 4):
        raise DimensionError("alt_reduction expects a 4x4 matrix")
    out = np.array(
        [[m[0, 0] + m[1, 1], m[0, 3] + m[1, 2]], [m[3, 0] + m[2, 1], m[2, 2] + m[3, 3]]],
        dtype=complex,
    )
    try:
        return validate_density(out)
    except InvalidDensityError as exc:
        raise InvalidDensityError(f"alt reduction produced a non-density output: {exc}") from exc


def permuted_portrait(rho, perm: Sequence[int] = (0, 1, 2, 3)) -> np.ndarray:
    """Spin-3/2 portrait after relabelling: ``rho'[i, j] = rho[perm[i], perm[j]]``."""
    m = validate_density(rho)
    if m.shape != (4, 4):
        raise DimensionError("permuted_portrait expects a 4x4 matrix")
    p = list(perm)
    if sorted(p) != [0, 1, 2, 3]:
        raise ValueError(f"{perm!r} is not a permutation of 0..3")
    r = m[np.ix_(p, p)]
    out = np.array(
        [[r[0, 0] + r[2, 2], r[0, 1] + r[2, 3]], [r[1, 0] + r[3, 2], r[1, 1] + r[3, 3]]],
        dtype=complex,
    )
    return validate_density(out)


def _as_reduction(red) -> Reduction:
    if isinstance(red, Reduction):
        return red
    return reduction(red)


def check_monotonicity(rho, sigma, red="ptrace", tol: float = MONO_TOL) -> InequalityReport:
    """``D(rho||sigma) >= D(R(rho)||R(sigma))`` for a reduction ``R``."""
    red = _as_reduction(red)
    r = validate_density(rho)
    s = validate_density(sigma)
    rr = validate_density(red.apply(r))
    rs = validate_density(red.apply(s))
    lhs = relative_entropy(r, s)
    rhs = relative_entropy(rr, rs) if math.isfinite(lhs) else 0.0
    return InequalityReport(
        name=f"monotonicity[{red.name}]",
        lhs=lhs,
        rhs=rhs,
        tolerance=tol,
        digest=matrix_digest(r) + ":" + matrix_digest(s),
        extra={"support_violation": not math.isfinite(lhs)},
    )


def _full_rank_log(m: np.ndarray) -> np.ndarray:
    w = hermitian_eig(m).eigenvalues
    if w[0] <= EIG_FLOOR:
        raise SupportError("equality residual needs full-rank inputs")
    return matrix_ln(m)


def equality_residual(rho, sigma, red="ptrace") -> float:
    """Max-norm of ``(ln rho - ln sigma) - lift(ln R(rho) - ln R(sigma))``."""
    red = _as_reduction(red)
    r = validate_density(rho)
    s = validate_density(sigma)
    full = _full_rank_log(r) - _full_rank_log(s)
    reduced = _full_rank_log(red.apply(r)) - _full_rank_log(red.apply(s))
    return float(np.max(np.abs(full - red.lift(reduced))))


def regularize(sigma, eps: float = 1e-6) -> np.ndarray:
    """Mix in ``eps`` of the maximally mixed state so relative entropies stay finite."""
    m = as_matrix(sigma)
    n = m.shape[0]
    return (1 - eps) * m + eps * np.eye(n) / n
