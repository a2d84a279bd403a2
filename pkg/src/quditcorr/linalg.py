"""Dense complex-matrix substrate shared by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Vectorization is row-major: ``(a11, a12, ..., a1m, a21, ...)``, which is
the ordering the map matrices in :mod:`quditcorr.maps` are written against.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence, Union

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-10
UNITARY_TOL = 1e-10
EIG_FLOOR = 1e-14

SeedLike = Union[int, Sequence[int], np.random.Generator, None]


class DimensionError(ValueError):
    """Shapes do not fit the requested operation."""


class NotHermitianError(ValueError):
    pass


class InvalidDensityError(ValueError):
    """Input is not a Hermitian, unit-trace, positive semidefinite matrix."""


class NotUnitaryError(ValueError):
    pass


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def rng_from(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# -- validation ---------------------------------------------------------------


def hermiticity_error(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a)
    return m.shape[0] == m.shape[1] and hermiticity_error(m) <= tol


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    m = as_matrix(u)
    if m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))) <= tol


def check_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    m = as_matrix(u)
    if not is_unitary(m, tol):
        raise NotUnitaryError("matrix is not unitary within tolerance")
    return m


def validate_density(
    a,
    herm_tol: float = HERMITIAN_TOL,
    trace_tol: float = TRACE_TOL,
    psd_tol: float = PSD_TOL,
) -> np.ndarray:
    """Return ``a`` as a complex array, raising InvalidDensityError if it is not a density matrix."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise InvalidDensityError(f"density matrix must be square, got {m.shape}")
    herr = hermiticity_error(m)
    if herr > herm_tol:
        raise InvalidDensityError(f"not Hermitian (max deviation {herr:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidDensityError(f"trace is {tr.real:.15g}, expected 1")
    lmin = float(np.linalg.eigvalsh(m)[0])
    if lmin < -psd_tol:
        raise InvalidDensityError(f"not positive semidefinite (min eigenvalue {lmin:.3e})")
    return m


def is_density(a, **tols) -> bool:
    try:
        validate_density(a, **tols)
    except (InvalidDensityError, DimensionError, ValueError):
        return False
    return True


# -- vectorization and tensor operations --------------------------------------


def vectorize(a) -> np.ndarray:
    return as_matrix(a).reshape(-1).copy()


def devectorize(v, rows: int, cols: int) -> np.ndarray:
    vec = np.asarray(v, dtype=complex).reshape(-1)
    if vec.size != rows * cols:
        raise DimensionError(f"vector of length {vec.size} cannot fill a {rows}x{cols} matrix")
    return vec.reshape(rows, cols).copy()


def tensor_product(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho, dim1: int, dim2: int, traced_subsystem: int) -> np.ndarray:
    """Trace out subsystem 1 or 2 of a ``dim1*dim2`` square matrix."""
    m = as_matrix(rho)
    if m.shape != (dim1 * dim2, dim1 * dim2):
        raise DimensionError(f"{m.shape} does not factor as {dim1}x{dim2}")
    t = m.reshape(dim1, dim2, dim1, dim2)
    if traced_subsystem == 1:
        return np.einsum("ijik->jk", t)
    if traced_subsystem == 2:
        return np.einsum("ijkj->ik", t)
    raise ValueError("traced_subsystem must be 1 or 2")


def partial_transpose(rho) -> np.ndarray:
    """Transpose every 2x2 block of a 4x4 matrix.

    Entry pattern::

        r11 r21 r13 r23
        r12 r22 r14 r24
        r31 r41 r33 r43
        r32 r42 r34 r44
    """
    m = as_matrix(rho)
    if m.shape != (4, 4):
        raise DimensionError("partial_transpose expects a 4x4 matrix")
    return m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4).copy()


# -- spectral calculus --------------------------------------------------------


def hermitian_eig(a, tol: float = HERMITIAN_TOL) -> Spectrum:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionError("hermitian_eig expects a square matrix")
    if hermiticity_error(m) > tol:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(m)
    return Spectrum(w, v)


def ln_q(x, q: float = 1.0):
    """Deformed logarithm ``(x**(q-1) - 1)/(q-1)``; natural log when q is 1."""
    x = np.asarray(x, dtype=float)
    if abs(q - 1.0) < 1e-8:
        return np.log(x)
    return np.expm1((q - 1.0) * np.log(x)) / (q - 1.0)


def matrix_ln(a, q: float = 1.0) -> np.ndarray:
    """Apply ``ln_q`` to the spectrum of a positive semidefinite matrix.

    Eigenvalues below ``EIG_FLOOR`` are raised to it so the result stays finite.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    w, v = hermitian_eig(a)
    if w[0] < -PSD_TOL:
        raise InvalidDensityError(f"negative eigenvalue {w[0]:.3e}")
    lw = ln_q(np.maximum(w, EIG_FLOOR), q)
    return (v * lw) @ v.conj().T


def entropy_from_eigenvalues(w, q: float = 1.0) -> float:
    """``-sum(l * ln_q(l))`` with terms at ``l <= EIG_FLOOR`` dropped."""
    w = np.asarray(w, dtype=float)
    w = w[w > EIG_FLOOR]
    return float(-np.sum(w * ln_q(w, q)))


# -- random sampling ----------------------------------------------------------


def ginibre(n: int, rng: np.random.Generator, cols: int | None = None) -> np.ndarray:
    cols = n if cols is None else cols
    return (rng.standard_normal((n, cols)) + 1j * rng.standard_normal((n, cols))) / np.sqrt(2)


def random_density(n: int, rng_seed: SeedLike = None) -> np.ndarray:
    """Ginibre density ``G G^+ / Tr(G G^+)``; deterministic per seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    g = ginibre(n, rng_from(rng_seed))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_pure_density(n: int, rng_seed: SeedLike = None) -> np.ndarray:
    psi = ginibre(n, rng_from(rng_seed), cols=1)[:, 0]
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_unitary(n: int, rng_seed: SeedLike = None) -> np.ndarray:
    """Haar unitary from QR of a Ginibre matrix with the phases of R's diagonal fixed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q, r = np.linalg.qr(ginibre(n, rng_from(rng_seed)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(n: int, rng_seed: SeedLike = None) -> np.ndarray:
    g = ginibre(n, rng_from(rng_seed))
    return 0.5 * (g + g.conj().T)


def su2_from_euler(phi: float, theta: float, psi: float) -> np.ndarray:
    """``exp(-i phi sz/2) exp(-i theta sy/2) exp(-i psi sz/2)``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    ep = np.exp(-0.5j * (phi + psi))
    em = np.exp(-0.5j * (phi - psi))
    return np.array([[ep * c, -em * s], [np.conj(em) * s, np.conj(ep) * c]])


def matrix_digest(a) -> str:
    import hashlib

    m = np.ascontiguousarray(as_matrix(a))
    return hashlib.sha256(m.tobytes()).hexdigest()[:16]
