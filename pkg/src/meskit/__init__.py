"""meskit: constructive toolkit for maps preserving maximally entangled states.

Builds maximally entangled states from coisometries, constructs the canonical
preserver forms (unitary conjugation with an optional transpose, the square-
space switch form, and the trace form), detects the identity-vs-transpose
branch through a 4x4 Choi-matrix determinant, extends preservers blockwise to
the square space, and decomposes an arbitrary preserver back into its
(sigma, U, V) data.
"""

from .choi import (
    RestrictedMapG,
    align_images,
    choi_matrix,
    detect_sigma,
    flag_from_determinant,
    phi_on_cross_term,
    restricted_g,
    zeta_image,
)
from .classify import (
    DecomposeConfig,
    Decomposition,
    decompose,
    recover_unitary,
    verify_theorem_form,
)
from .errors import (
    AmbiguousSolutionError,
    DimensionError,
    InconsistentChoiError,
    MESKitError,
    NoSolutionError,
    NotHermitianError,
    NotInvertibleError,
    NotKroneckerError,
    NotMESError,
    NotOrthogonalError,
    NotPreserverError,
    NotUnitaryError,
    PhaseAlignmentError,
    SubspaceViolationError,
    ZeroOperatorError,
)
from .extension import (
    ExtendedSuperoperator,
    ad_commutation_residual,
    block_join,
    block_split,
    commutes_with_ad,
    extend,
    off_block_rotation,
    p_operator,
    q_operator,
    switch_commutation_witness,
)
from .states import (
    Coisometry,
    DensityOperator,
    are_orthogonal,
    canonical_family,
    is_coisometry,
    is_mes,
    orthogonal_family,
    pi,
    random_coisometry,
    representative,
)
from .superop import (
    SigmaFlag,
    Superoperator,
    apply,
    identity_superop,
    is_invertible_on_span,
    make_adjoint_preserver,
    make_swap_preserver,
    make_trace_preserver,
    preserves_mes,
    span_mes_basis,
    transpose_matrix,
)
from .tensor import (
    DEFAULT_TOL,
    Dims,
    fix_global_phase,
    haar_unitary,
    kron,
    nearest_kron_factor,
    partial_trace_y,
    rank_one_factor,
    unvec,
    vec,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousSolutionError",
    "Coisometry",
    "DEFAULT_TOL",
    "DecomposeConfig",
    "Decomposition",
    "DensityOperator",
    "DimensionError",
    "Dims",
    "ExtendedSuperoperator",
    "InconsistentChoiError",
    "MESKitError",
    "NoSolutionError",
    "NotHermitianError",
    "NotInvertibleError",
    "NotKroneckerError",
    "NotMESError",
    "NotOrthogonalError",
    "NotPreserverError",
    "NotUnitaryError",
    "PhaseAlignmentError",
    "RestrictedMapG",
    "SigmaFlag",
    "SubspaceViolationError",
    "Superoperator",
    "ZeroOperatorError",
    "ad_commutation_residual",
    "align_images",
    "apply",
    "are_orthogonal",
    "block_join",
    "block_split",
    "canonical_family",
    "choi_matrix",
    "commutes_with_ad",
    "decompose",
    "detect_sigma",
    "extend",
    "fix_global_phase",
    "flag_from_determinant",
    "haar_unitary",
    "identity_superop",
    "is_coisometry",
    "is_invertible_on_span",
    "is_mes",
    "kron",
    "make_adjoint_preserver",
    "make_swap_preserver",
    "make_trace_preserver",
    "nearest_kron_factor",
    "off_block_rotation",
    "orthogonal_family",
    "p_operator",
    "partial_trace_y",
    "phi_on_cross_term",
    "pi",
    "preserves_mes",
    "q_operator",
    "random_coisometry",
    "rank_one_factor",
    "recover_unitary",
    "representative",
    "restricted_g",
    "span_mes_basis",
    "switch_commutation_witness",
    "transpose_matrix",
    "unvec",
    "vec",
    "verify_theorem_form",
    "zeta_image",
]
