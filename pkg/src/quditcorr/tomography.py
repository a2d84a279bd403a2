"""Unitary tomograms, marginals over product factors, and no-signaling checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from .linalg import (
    DimensionError,
    SeedLike,
    as_matrix,
    check_unitary,
    matrix_digest,
    random_unitary,
    rng_from,
    validate_density,
)
from .report import InequalityReport

PROB_CLAMP = 1e-12
NOSIG_TOL = 1e-12

H = Fraction(1, 2)


def spin_label(m) -> str:
    return str(Fraction(m))


@dataclass(frozen=True)
class IndexBijection:
    """Outcome labels in flat-index order; index ``k`` (1-based) is ``labels[k-1]``."""

    kind: str
    labels: tuple
    aliases: dict = field(default_factory=dict)

    def index(self, label) -> int:
        if label in self.aliases:
            label = self.aliases[label]
        return self.labels.index(label) + 1

    def label(self, index: int):
        if not 1 <= index <= len(self.labels):
            raise IndexError(index)
        return self.labels[index - 1]

    def label_strings(self) -> list[str]:
        out = []
        for lab in self.labels:
            if isinstance(lab, tuple):
                out.append(",".join(spin_label(x) for x in lab))
            else:
                out.append(spin_label(lab))
        return out


def index_bijection(kind: str) -> IndexBijection:
    """Label tables for 4- and 6-outcome tomograms.

    ``qubit_qutrit`` lists the product labels (m1, m2) of a qubit-qutrit pair;
    ``aliases`` maps the spin-2 labels -2..2 and the extra vector ``"an"``
    onto them.  The spin-2 label 0 is taken as (1/2, -1) so that the table is
    one-to-one.
    """
    if kind == "two_qubit":
        return IndexBijection(kind, ((H, H), (H, -H), (-H, H), (-H, -H)))
    if kind == "qudit32":
        return IndexBijection(kind, (3 * H, H, -H, -3 * H))
    if kind == "qubit_qutrit":
        labels = ((H, 1), (H, 0), (H, -1), (-H, 1), (-H, 0), (-H, -1))
        aliases = dict(zip((-2, -1, 0, 1, 2, "an"), labels))
        return IndexBijection(kind, labels, aliases)
    raise ValueError(f"unknown bijection kind {kind!r}")


@dataclass
class Tomogram:
    probs: np.ndarray
    unitary_digest: str = ""
    index_labels: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"probs": [float(p) for p in self.probs], "labels": list(self.index_labels)}


def tomogram_probs(rho, u) -> np.ndarray:
    """Diagonal of ``u rho u^+`` with round-off negatives clamped to zero."""
    w = np.einsum("nk,kl,nl->n", u, rho, u.conj()).real
    if np.any(w < -PROB_CLAMP):
        raise ValueError(f"negative tomogram probability {w.min():.3e}")
    return np.where(w < 0, 0.0, w)


def tomogram(rho, u, labels: Sequence | None = None) -> Tomogram:
    m = validate_density(rho)
    uu = check_unitary(u)
    if uu.shape != m.shape:
        raise DimensionError(f"unitary {uu.shape} does not match state {m.shape}")
    probs = tomogram_probs(m, uu)
    if labels is None:
        labels = [str(k + 1) for k in range(len(probs))]
    return Tomogram(probs, matrix_digest(uu), list(labels))


def marginal(t, dims: Sequence[int], over) -> np.ndarray:
    """Sum a tomogram over the outcome index of factor(s) ``over`` (1-based)."""
    probs = np.asarray(t.probs if isinstance(t, Tomogram) else t, dtype=float)
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != probs.size:
        raise DimensionError(f"{probs.size} outcomes do not factor as {dims}")
    over = (over,) if isinstance(over, int) else tuple(over)
    if any(not 1 <= k <= len(dims) for k in over):
        raise ValueError(f"factor index out of range: {over}")
    axes = tuple(k - 1 for k in over)
    return probs.reshape(dims).sum(axis=axes).reshape(-1)


def product_unitary(factors: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, factors)


def no_signaling_check(
    A,
    dims: Sequence[int],
    trials: int = 100,
    rng_seed: SeedLike = 0,
    tol: float = NOSIG_TOL,
) -> InequalityReport:
    """Marginal of each factor must not depend on the other factors' local unitaries.

    For every trial and every factor ``k`` a fixed ``u_k`` is combined with two
    independent draws of all other factors; the reported value is the largest
    sup-norm difference between the two factor-``k`` marginals.
    """
    m = validate_density(A)
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != m.shape[0]:
        raise DimensionError(f"dims {dims} do not multiply to {m.shape[0]}")
    rng = rng_from(rng_seed)
    nf = len(dims)
    worst = 0.0
    for _ in range(trials):
        for k in range(nf):
            uk = random_unitary(dims[k], rng)
            others = [k2 + 1 for k2 in range(nf) if k2 != k]
            draws = []
            for _rep in range(2):
                fac = [uk if j == k else random_unitary(dims[j], rng) for j in range(nf)]
                w = tomogram_probs(m, product_unitary(fac))
                draws.append(marginal(w, dims, others) if others else w)
            worst = max(worst, float(np.max(np.abs(draws[0] - draws[1]))))
    return InequalityReport(
        name="no_signaling",
        lhs=0.0,
        rhs=worst,
        tolerance=tol,
        digest=matrix_digest(m),
        extra={"dims": list(dims), "trials": trials, "max_deviation": worst},
    )


def embed_pad(A, N_tilde: int) -> np.ndarray:
    """``[[A, 0], [0, 0]]`` of size ``N_tilde``."""
    m = validate_density(A)
    N = m.shape[0]
    if N_tilde < N:
        raise DimensionError(f"cannot pad a {N}x{N} matrix down to {N_tilde}")
    out = np.zeros((N_tilde, N_tilde), dtype=complex)
    out[:N, :N] = m
    return out


def direct_sum(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    out = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=complex)
    out[: a.shape[0], : a.shape[0]] = a
    out[a.shape[0] :, a.shape[0] :] = b
    return out
