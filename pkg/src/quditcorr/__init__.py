"""Quantum-correlation inequalities for single qudit states."""

from .bell import (
    ChshSetting,
    SeparableSpec,
    chsh_sign_matrix,
    chsh_value,
    classical_B,
    laplace_check,
    mix_separable,
    optimize_chsh,
    ppt_check,
    qudit32_interpretation,
    stochastic_tomogram_matrix,
)
from .entropy import (
    alt_reduction,
    check_monotonicity,
    check_subadditivity,
    deformed_entropy,
    diagonal_inequality,
    equality_residual,
    permuted_portrait,
    relative_entropy,
    single_qudit_mutual_info,
    von_neumann_entropy,
)
from .kernels import BACKEND
from .linalg import (
    devectorize,
    hermitian_eig,
    matrix_ln,
    partial_trace,
    partial_transpose,
    random_density,
    random_unitary,
    su2_from_euler,
    tensor_product,
    vectorize,
)
from .maps import (
    MapMatrix,
    apply_map,
    build_projector_map,
    is_positive_map_on_sample,
    m1_matrix,
    m1_tilde_matrix,
    m2_matrix,
    m2_tilde_matrix,
    portrait_qubit,
    portrait_reduce,
)
from .report import InequalityReport
from .tomography import Tomogram, embed_pad, index_bijection, marginal, no_signaling_check, tomogram

__version__ = "0.1.0"
