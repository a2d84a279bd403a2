"""CHSH functional on 4x4 density matrices and its bounds.

``B = Tr(I M)`` where column k of the stochastic matrix ``M`` is the tomogram
of ``rho`` under ``u_k`` and ``I`` is the fixed sign matrix.  With
``u1 = ua(x)ub, u2 = ua(x)uc, u3 = ud(x)ub, u4 = ud(x)uc`` this is the usual
CHSH combination ``E(a,b) + E(a,c) + E(d,b) - E(d,c)``.

``strict_paper_pairing=True`` uses ``u3 = ud(x)ua`` instead.  That pairing is
kept so its maximum can be measured; it is not the CHSH pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .linalg import (
    PSD_TOL,
    DimensionError,
    SeedLike,
    as_matrix,
    check_unitary,
    matrix_digest,
    partial_transpose,
    random_density,
    random_pure_density,
    rng_from,
    su2_from_euler,
    validate_density,
)
from .report import InequalityReport
from .tomography import index_bijection, tomogram_probs

TSIRELSON = 2 * math.sqrt(2)
SEPARABLE_BOUND = 2.0
BOUND_SLACK = 1e-9
LAPLACE_TOL = 1e-6

CHSH_PAIRS = ((0, 1), (0, 2), (3, 1), (3, 2))
PAPER_PAIRS = ((0, 1), (0, 2), (3, 0), (3, 2))


def chsh_sign_matrix() -> np.ndarray:
    row = [1.0, -1.0, -1.0, 1.0]
    return np.array([row, row, row, [-x for x in row]])


def pairs_for(strict_paper_pairing: bool = False) -> tuple:
    return PAPER_PAIRS if strict_paper_pairing else CHSH_PAIRS


Angles = tuple[float, float, float]


@dataclass(frozen=True)
class ChshSetting:
    """Euler angles (phi, theta, psi) of the four local 2x2 unitaries."""

    a: Angles = (0.0, 0.0, 0.0)
    b: Angles = (0.0, 0.0, 0.0)
    c: Angles = (0.0, 0.0, 0.0)
    d: Angles = (0.0, 0.0, 0.0)

    def __post_init__(self):
        for name in "abcd":
            t = tuple(float(v) for v in getattr(self, name))
            if len(t) != 3 or not all(math.isfinite(v) for v in t):
                raise ValueError(f"setting {name} needs three finite angles")
            object.__setattr__(self, name, t)

    def to_array(self) -> np.ndarray:
        return np.array(self.a + self.b + self.c + self.d, dtype=float)

    @classmethod
    def from_array(cls, x) -> "ChshSetting":
        x = [float(v) for v in np.asarray(x, dtype=float).reshape(12)]
        return cls(tuple(x[0:3]), tuple(x[3:6]), tuple(x[6:9]), tuple(x[9:12]))

    @classmethod
    def random(cls, rng_seed: SeedLike = None) -> "ChshSetting":
        return cls.from_array(rng_from(rng_seed).uniform(-np.pi, np.pi, 12))

    def unitaries(self) -> list[np.ndarray]:
        return [su2_from_euler(*getattr(self, name)) for name in "abcd"]

    def to_dict(self) -> dict:
        return {k: list(getattr(self, k)) for k in "abcd"}


def tsirelson_setting() -> ChshSetting:
    """Real rotations reaching ``2*sqrt(2)`` on the Bell matrix."""
    q = math.pi / 4
    return ChshSetting((0, 0, 0), (0, q, 0), (0, -q, 0), (0, 2 * q, 0))


def product_unitaries(setting: ChshSetting, strict_paper_pairing: bool = False) -> list[np.ndarray]:
    us = setting.unitaries()
    return [np.kron(us[i], us[j]) for i, j in pairs_for(strict_paper_pairing)]


def stochastic_tomogram_matrix(rho, us: Sequence) -> np.ndarray:
    """4x4 matrix whose column k is the tomogram of ``rho`` under ``us[k]``."""
    m = validate_density(rho)
    if m.shape != (4, 4) or len(us) != 4:
        raise DimensionError("need a 4x4 state and four 4x4 unitaries")
    cols = []
    for u in us:
        uu = check_unitary(u)
        if uu.shape != (4, 4):
            raise DimensionError("unitaries must be 4x4")
        cols.append(tomogram_probs(m, uu))
    return np.column_stack(cols)


def chsh_value(rho, setting: ChshSetting, strict_paper_pairing: bool = False) -> float:
    M = stochastic_tomogram_matrix(rho, product_unitaries(setting, strict_paper_pairing))
    return float(np.trace(chsh_sign_matrix() @ M))


def chsh_values(rho, settings: np.ndarray, strict_paper_pairing: bool = False) -> np.ndarray:
    """Fast path: B for each row of an (m, 12) array of angles."""
    m = validate_density(rho)
    if m.shape != (4, 4):
        raise DimensionError("CHSH needs a 4x4 state")
    return kernels.chsh_batch(m, settings, pairs_for(strict_paper_pairing), chsh_sign_matrix())


# -- classical stochastic matrices ------------------------------------------------


def _stochastic2(p: float, r: float) -> np.ndarray:
    return np.array([[p, r], [1 - p, 1 - r]])


def classical_B(x: float, y: float, z: float, t: float, allow_outside: bool = False) -> float:
    """``Tr(I M)`` for ``M = [[x, y], [1-x, 1-y]] (x) [[z, t], [1-z, 1-t]]``."""
    if not allow_outside and not all(0.0 <= v <= 1.0 for v in (x, y, z, t)):
        raise ValueError("arguments must lie in [0, 1]; pass allow_outside=True to evaluate anyway")
    M = np.kron(_stochastic2(x, y), _stochastic2(z, t))
    return float(np.trace(chsh_sign_matrix() @ M))


def second_differences(point: Sequence[float], h: float) -> np.ndarray:
    p = np.asarray(point, dtype=float)
    b0 = classical_B(*p, allow_outside=True)
    out = np.empty(4)
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        out[k] = (classical_B(*(p + e), allow_outside=True) - 2 * b0 + classical_B(*(p - e), allow_outside=True)) / h**2
    return out


def laplace_check(points, h: float = 1e-3, tol: float = LAPLACE_TOL) -> InequalityReport:
    """Central-difference Laplacian of ``classical_B`` at each point; reports the largest magnitude."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    worst_sum = 0.0
    worst_axis = 0.0
    for p in pts:
        sd = second_differences(p, h)
        worst_sum = max(worst_sum, abs(float(sd.sum())))
        worst_axis = max(worst_axis, float(np.max(np.abs(sd))))
    return InequalityReport(
        name="laplace",
        lhs=0.0,
        rhs=worst_sum,
        tolerance=tol,
        digest=f"points={len(pts)},h={h!r}",
        extra={"max_laplacian": worst_sum, "max_axis_second_difference": worst_axis},
    )


# -- separable states and the PPT test ------------------------------------------


@dataclass
class SeparableSpec:
    weights: np.ndarray
    factors: list = field(default_factory=list)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be a probability vector")
        if len(self.factors) != w.size:
            raise ValueError("one factor pair per weight")
        pairs = []
        for r1, r2 in self.factors:
            r1, r2 = validate_density(r1), validate_density(r2)
            if r1.shape != (2, 2) or r2.shape != (2, 2):
                raise ValueError("factors must be 2x2 densities")
            pairs.append((r1, r2))
        self.weights = w
        self.factors = pairs


def random_separable_spec(terms: int = 8, rng_seed: SeedLike = None, pure: bool = True) -> SeparableSpec:
    rng = rng_from(rng_seed)
    w = rng.dirichlet(np.ones(terms))
    w = w / w.sum()
    draw = random_pure_density if pure else random_density
    return SeparableSpec(w, [(draw(2, rng), draw(2, rng)) for _ in range(terms)])


def mix_separable(spec: SeparableSpec) -> np.ndarray:
    rho = sum(p * np.kron(r1, r2) for p, (r1, r2) in zip(spec.weights, spec.factors))
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


@dataclass(frozen=True)
class PptResult:
    min_pt_eigenvalue: float
    is_ppt: bool

    def to_report(self, digest: str = "") -> InequalityReport:
        return InequalityReport("ppt", self.min_pt_eigenvalue, 0.0, PSD_TOL, digest)


def ppt_check(rho, tol: float = PSD_TOL) -> PptResult:
    m = as_matrix(rho)
    if m.shape != (4, 4):
        raise DimensionError("ppt_check expects a 4x4 matrix")
    pt = partial_transpose(m)
    lmin = float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0])
    return PptResult(lmin, lmin >= -tol)


# -- optimization -----------------------------------------------------------------


@dataclass
class ChshResult:
    best_B: float
    signed_B: float
    best_setting: ChshSetting
    restarts: int
    evaluations: int
    backend: str
    strict_paper_pairing: bool = False
    restart_values: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "best_B": self.best_B,
            "signed_B": self.signed_B,
            "best_setting": self.best_setting.to_dict(),
            "restarts": self.restarts,
            "evaluations": self.evaluations,
            "backend": self.backend,
            "strict_paper_pairing": self.strict_paper_pairing,
        }


def optimize_chsh(
    rho,
    restarts: int = 32,
    rng_seed: int = 0,
    initial: ChshSetting | None = None,
    strict_paper_pairing: bool = False,
    max_evals: int = 2000,
    xtol: float = 1e-8,
    step: float = 0.5,
    backend: str | None = None,
) -> ChshResult:
    """Multi-start simplex search for the largest ``|B|`` over the 12 Euler angles.

    Restart ``r`` starts from angles drawn with ``default_rng([rng_seed, r])``;
    when ``initial`` is given, restart 0 starts there instead.
    """
    m = validate_density(rho)
    if m.shape != (4, 4):
        raise DimensionError("CHSH needs a 4x4 state")
    impl = kernels.get_backend(backend) if backend else kernels
    pairs = np.asarray(pairs_for(strict_paper_pairing), dtype=np.int64)
    sign = chsh_sign_matrix()
    best_x, best_f = None, -np.inf
    total = 0
    values = []
    for r in range(max(1, restarts)):
        if r == 0 and initial is not None:
            x0 = initial.to_array()
        else:
            x0 = np.random.default_rng([int(rng_seed), r]).uniform(-np.pi, np.pi, 12)
        x, f, nev = impl.nelder_mead(m, x0, pairs, sign, step, max_evals, xtol)
        total += nev
        values.append(float(f))
        if f > best_f:
            best_x, best_f = np.asarray(x), float(f)
    setting = ChshSetting.from_array(best_x)
    signed = float(impl.chsh_angles(m, best_x, pairs, sign))
    return ChshResult(
        best_B=abs(signed),
        signed_B=signed,
        best_setting=setting,
        restarts=max(1, restarts),
        evaluations=total,
        backend=getattr(impl, "BACKEND", kernels.BACKEND),
        strict_paper_pairing=strict_paper_pairing,
        restart_values=values,
    )


def chsh_report(result: ChshResult, digest: str = "") -> InequalityReport:
    """The optimum checked against the quantum ceiling ``2*sqrt(2)``."""
    return InequalityReport(
        name="chsh_max",
        lhs=TSIRELSON,
        rhs=result.best_B,
        tolerance=BOUND_SLACK,
        digest=digest,
        extra={
            **result.to_dict(),
            "exceeds_separable_bound": result.best_B > SEPARABLE_BOUND + BOUND_SLACK,
        },
    )


# -- spin-3/2 reading -------------------------------------------------------------


def _labelled_B(columns: list[dict], bij) -> float:
    M = np.column_stack([[col[lab] for lab in bij.labels] for col in columns])
    return float(np.trace(chsh_sign_matrix() @ M))


def qudit32_interpretation(rho, setting: ChshSetting | None = None, strict_paper_pairing: bool = False) -> dict:
    """Tomograms and B read through the two-qubit and the spin-3/2 label tables.

    Without a setting, the tomogram is taken at ``u = 1``.
    """
    m = validate_density(rho)
    if m.shape != (4, 4):
        raise DimensionError("qudit32_interpretation expects a 4x4 matrix")
    two, j32 = index_bijection("two_qubit"), index_bijection("qudit32")
    us = [np.eye(4)] * 4 if setting is None else product_unitaries(setting, strict_paper_pairing)
    cols = [tomogram_probs(m, check_unitary(u)) for u in us]
    by_two = [dict(zip(two.labels, c)) for c in cols]
    by_j32 = [dict(zip(j32.labels, c)) for c in cols]
    return {
        "two_qubit": dict(zip(two.label_strings(), (float(p) for p in cols[0]))),
        "qudit32": dict(zip(j32.label_strings(), (float(p) for p in cols[0]))),
        "B_two_qubit": _labelled_B(by_two, two),
        "B_qudit32": _labelled_B(by_j32, j32),
        "digest": matrix_digest(m),
    }
