"""Superoperators on L(X (x) Y) and the canonical entanglement-preserver forms.

A superoperator is stored as an (mn)^2 x (mn)^2 matrix acting on row-vectorized
operators: ``vec(Phi(M)) = Phi.matrix @ vec(M)``.  Under the row-stacking
convention, conjugation ``M -> W M W*`` has matrix ``kron(W, conj(W))`` and the
basis transpose ``M -> M^T`` is the permutation built by :func:`transpose_matrix`.

The constructors cover the three canonical preserver families:

* ``make_adjoint_preserver``: ``M -> (U (x) V) M^sigma (U (x) V)*``
* ``make_swap_preserver`` (square case only): the same composed with the
  switch ``A (x) B -> B (x) A``
* ``make_trace_preserver``: ``M -> tr(M) rho`` for a fixed MES ``rho``
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, NotMESError, NotUnitaryError
from .states import (
    Coisometry,
    DensityOperator,
    canonical_family,
    is_mes,
    orthogonal_family,
    pi,
    random_coisometry,
)
from .tensor import Dims, as_complex, frobenius, kron, scaled_tol, vec

_SPAN_SEED = 0x6D6573  # fixed stream so span bases are a function of dims only


class SigmaFlag(enum.Enum):
    """Whether a preserver composes unitary conjugation with the identity or
    the transpose in the fixed product basis."""

    IDENTITY = "identity"
    TRANSPOSE = "transpose"


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Linear map on L(X (x) Y) as a matrix on row-vectorized operators.

    The matrix is defined on all of L(X (x) Y) even though the classification
    results only constrain behavior on span(MES); every certificate and
    recovery in this package reads the map on MES samples only, so the
    off-span action is a representation detail.
    """

    matrix: np.ndarray
    dims: Dims

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", as_complex(self.matrix))
        side = self.dims.mn * self.dims.mn
        if self.matrix.shape != (side, side):
            raise DimensionError(
                f"superoperator for dims {self.dims} must be {side}x{side}, "
                f"got {self.matrix.shape}"
            )


def transpose_matrix(d: int) -> np.ndarray:
    """Permutation matrix T with T @ vec(M) = vec(M^T) for d x d matrices."""
    t = np.zeros((d * d, d * d))
    idx = np.arange(d * d)
    rows, cols = divmod(idx, d)
    t[idx, cols * d + rows] = 1.0
    return t


def identity_superop(dims: Dims) -> Superoperator:
    side = dims.mn * dims.mn
    return Superoperator(matrix=np.eye(side, dtype=complex), dims=dims)


def apply(phi, M) -> np.ndarray:
    """Evaluate a superoperator on an operator: unvec(matrix @ vec(M))."""
    mat = phi.matrix if hasattr(phi, "matrix") else as_complex(phi)
    M = as_complex(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square operator, got shape {M.shape}")
    d = M.shape[0]
    if mat.shape != (d * d, d * d):
        raise DimensionError(f"superoperator side {mat.shape} does not match operator {M.shape}")
    return (mat @ M.reshape(-1)).reshape(d, d)


def _require_unitary(U: np.ndarray, name: str, tol: float = 1e-10) -> np.ndarray:
    U = as_complex(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise NotUnitaryError(f"{name} must be square, got shape {U.shape}")
    dev = frobenius(U @ U.conj().T - np.eye(U.shape[0]))
    if dev >= scaled_tol(tol, frobenius(U)):
        raise NotUnitaryError(f"{name} deviates from unitarity by {dev:.3e}")
    return U


def make_adjoint_preserver(U, V, sigma: SigmaFlag) -> Superoperator:
    """Superoperator M -> (U (x) V) M^sigma (U (x) V)* for unitary U (m x m) and
    V (n x n); m must divide n."""
    U = _require_unitary(U, "U")
    V = _require_unitary(V, "V")
    m, n = U.shape[0], V.shape[0]
    if n % m != 0:
        raise DimensionError(f"V dimension {n} is not a multiple of U dimension {m}")
    dims = Dims(m=m, n=n, k=n // m)
    w = kron(U, V)
    mat = kron(w, w.conj())
    if sigma is SigmaFlag.TRANSPOSE:
        mat = mat @ transpose_matrix(dims.mn)
    return Superoperator(matrix=mat, dims=dims)


def make_swap_preserver(U, V, sigma: SigmaFlag) -> Superoperator:
    """Square-case preserver M -> (U (x) V) (S(M))^sigma (U (x) V)* where S is
    the switch A (x) B -> B (x) A; requires U and V of equal size."""
    U = _require_unitary(U, "U")
    V = _require_unitary(V, "V")
    if U.shape != V.shape:
        raise DimensionError(f"switch form needs equal factor dimensions, got {U.shape} and {V.shape}")
    m = U.shape[0]
    dims = Dims(m=m, n=m, k=1)
    flip = transpose_matrix(m)  # the flip unitary on C^m (x) C^m
    switch = kron(flip, flip.conj())
    w = kron(U, V)
    mat = kron(w, w.conj())
    if sigma is SigmaFlag.TRANSPOSE:
        mat = mat @ transpose_matrix(dims.mn)
    return Superoperator(matrix=mat @ switch, dims=dims)


def make_trace_preserver(rho: DensityOperator) -> Superoperator:
    """Non-invertible preserver M -> tr(M) rho for a fixed MES rho."""
    if not is_mes(rho):
        raise NotMESError("trace-form preserver requires an MES target state")
    mn = rho.dims.mn
    mat = np.outer(vec(rho.matrix), vec(np.eye(mn)))
    return Superoperator(matrix=mat, dims=rho.dims)


def _family_states(dims: Dims, family: list[Coisometry]) -> list[np.ndarray]:
    """MES elements generated by a mutually orthogonal family: pi of each block
    and of the combinations (A_p + i^l A_q)/sqrt(2) (coisometries since the
    blocks are orthogonal)."""
    out = [pi(c).matrix for c in family]
    for p in range(len(family)):
        for q in range(p + 1, len(family)):
            for ell in range(4):
                comb = (family[p].matrix + (1j**ell) * family[q].matrix) / np.sqrt(2.0)
                out.append(pi(comb, dims).matrix)
    return out


@functools.lru_cache(maxsize=32)
def span_mes_basis(dims: Dims) -> tuple[np.ndarray, ...]:
    """Deterministic basis of span(MES) made of actual MES elements.

    MES samples are drawn from a fixed seeded Haar stream (plus the canonical
    family) until the numerical rank (SVD at 1e-9) is unchanged for three
    consecutive batches; a pivoted QR then selects a maximal linearly
    independent subset.  The cardinality is the computed complex dimension of
    span(MES) -- it is not assumed from any closed form.
    """
    per_draw = dims.k + 2 * dims.k * (dims.k - 1)
    guess = dims.mn * dims.mn - dims.m * dims.m + 1
    draws_per_batch = max(4, -(-guess // per_draw))
    elements = _family_states(dims, canonical_family(dims))
    ranks: list[int] = []
    draw = 0
    for _ in range(60):
        for _ in range(draws_per_batch):
            seed = np.random.SeedSequence([_SPAN_SEED, dims.m, dims.k, draw])
            elements.extend(_family_states(dims, orthogonal_family(dims, seed)))
            draw += 1
        stacked = np.array([vec(e) for e in elements]).T
        s = np.linalg.svd(stacked, compute_uv=False)
        ranks.append(int(np.sum(s > 1e-9 * s[0])))
        if len(ranks) >= 3 and ranks[-1] == ranks[-2] == ranks[-3]:
            break
    else:
        raise RuntimeError(f"span rank failed to stabilize for dims {dims}: {ranks}")
    rank = ranks[-1]
    stacked = np.array([vec(e) for e in elements]).T
    _, _, piv = scipy.linalg.qr(stacked, mode="economic", pivoting=True)
    basis = []
    for col in piv[:rank]:
        e = elements[int(col)].copy()
        e.flags.writeable = False
        basis.append(e)
    return tuple(basis)


@functools.lru_cache(maxsize=32)
def _span_orthobasis(dims: Dims) -> np.ndarray:
    """Orthonormal column basis of span(MES) inside C^{(mn)^2}."""
    cols = np.array([vec(e) for e in span_mes_basis(dims)]).T
    q, _ = np.linalg.qr(cols)
    q.flags.writeable = False
    return q


def preserves_mes(phi: Superoperator, num_samples: int = 20, tol: float = 1e-8, seed=0) -> bool:
    """Probabilistic preserver check: images of sampled MES must be MES.

    Sample i uses a seed derived from (seed, i), so the result does not depend
    on evaluation order.
    """
    for i in range(num_samples):
        A = random_coisometry(phi.dims, np.random.SeedSequence([_as_int(seed), 11, i]))
        if not is_mes(apply(phi, pi(A).matrix), phi.dims, tol):
            return False
    return True


def is_invertible_on_span(phi: Superoperator, tol: float = 1e-9) -> bool:
    """True iff the restriction of phi to span(MES) has smallest singular
    value above ``tol`` (in the orthonormal coordinates of the span basis)."""
    q = _span_orthobasis(phi.dims)
    restricted = q.conj().T @ (phi.matrix @ q)
    s = np.linalg.svd(restricted, compute_uv=False)
    return float(s[-1]) > tol


def _as_int(seed) -> int:
    if isinstance(seed, (int, np.integer)):
        return int(seed)
    raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
