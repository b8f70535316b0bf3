"""Blockwise extension of a preserver from L(X (x) Y) to L(Y (x) Y).

Index convention (fixed, and exercised by the test suite): Y (x) Y is
identified with (C^k (x) X) (x) Y, so a basis index of Y (x) Y decomposes as
``(block, x_index, y_index)`` and an operator M on Y (x) Y is a k x k array
of blocks ``M_pq`` in L(X (x) Y) occupying contiguous mn x mn slices.

The extension applies the base map blockwise -- ``[Phi(M_pq)]`` in the
identity branch, ``[Phi(M_qp)]`` (block transpose first) in the transpose
branch -- and commutes with conjugation by the structural sign and block-swap
unitaries built below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .states import pi, random_coisometry
from .superop import SigmaFlag, Superoperator, apply
from .tensor import Dims, as_complex, frobenius, kron


@dataclass(frozen=True, eq=False)
class ExtendedSuperoperator:
    """Superoperator on L(Y (x) Y) obtained by blockwise extension."""

    matrix: np.ndarray
    base_dims: Dims
    sigma: SigmaFlag

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", as_complex(self.matrix))
        side = self.base_dims.n**4
        if self.matrix.shape != (side, side):
            raise DimensionError(
                f"extended superoperator must be {side}x{side}, got {self.matrix.shape}"
            )

    @property
    def yy_dims(self) -> Dims:
        """Dims of the square space the extension acts on."""
        n = self.base_dims.n
        return Dims(m=n, n=n, k=1)


def block_split(M, dims: Dims) -> np.ndarray:
    """View an n^2 x n^2 operator on Y (x) Y as a (k, k, mn, mn) block array."""
    n, mn, k = dims.n, dims.mn, dims.k
    M = as_complex(M)
    if M.shape != (n * n, n * n):
        raise DimensionError(f"expected {n * n}x{n * n} operator, got {M.shape}")
    return M.reshape(k, mn, k, mn).transpose(0, 2, 1, 3)


def block_join(blocks, dims: Dims) -> np.ndarray:
    """Inverse of :func:`block_split`."""
    n, mn, k = dims.n, dims.mn, dims.k
    blocks = as_complex(blocks)
    if blocks.shape != (k, k, mn, mn):
        raise DimensionError(f"expected block array of shape {(k, k, mn, mn)}, got {blocks.shape}")
    return blocks.transpose(0, 2, 1, 3).reshape(n * n, n * n).copy()


def _grouping_permutation(dims: Dims) -> np.ndarray:
    """Map each flat vec index of L(Y (x) Y) to its (block-pair, inner) index."""
    n, mn, k = dims.n, dims.mn, dims.k
    side = n * n
    a = np.arange(side * side)
    row, col = divmod(a, side)
    p, r = divmod(row, mn)
    q, s = divmod(col, mn)
    return ((p * k + q) * mn + r) * mn + s


def extend(phi: Superoperator, sigma: SigmaFlag) -> ExtendedSuperoperator:
    """Blockwise extension of ``phi`` to L(Y (x) Y).

    With M = [M_pq] in k x k blocks, the result sends M to [phi(M_pq)] when
    ``sigma`` is the identity flag and to [phi(M_qp)] when it is the transpose
    flag.  The flag must come from the discriminant of ``phi`` for the
    extension to preserve MES; it is taken as an explicit argument so that the
    (fallible) detection stays separate from this (infallible) construction.
    """
    dims = phi.dims
    if dims.k < 2:
        raise DimensionError("extension is defined for block counts k >= 2")
    k = dims.k
    if sigma is SigmaFlag.TRANSPOSE:
        block_perm = np.zeros((k * k, k * k))
        for p in range(k):
            for q in range(k):
                block_perm[p * k + q, q * k + p] = 1.0
        grouped = kron(block_perm, phi.matrix)
    else:
        grouped = kron(np.eye(k * k), phi.matrix)
    g = _grouping_permutation(dims)
    matrix = grouped[np.ix_(g, g)]
    return ExtendedSuperoperator(matrix=matrix, base_dims=dims, sigma=sigma)


def p_operator(j: int, dims: Dims) -> np.ndarray:
    """Sign unitary on Y flipping the j-th block (1-based): (I_k - 2 E_jj) (x) I_m.

    Hermitian, involutive, and unitary by construction.
    """
    if not 1 <= j <= dims.k:
        raise IndexError(f"block index {j} out of range 1..{dims.k}")
    sign = np.eye(dims.k)
    sign[j - 1, j - 1] = -1.0
    return kron(sign, np.eye(dims.m))


def q_operator(p: int, q: int, dims: Dims) -> np.ndarray:
    """Block-transposition unitary on Y (x) Y: (T_pq (x) I_m) (x) I_n for the
    permutation T_pq of the p-th and q-th coordinates of C^k (1-based)."""
    if not 1 <= p < q <= dims.k:
        raise IndexError(f"need 1 <= p < q <= {dims.k}, got ({p}, {q})")
    t = np.eye(dims.k)
    t[[p - 1, q - 1]] = t[[q - 1, p - 1]]
    return kron(kron(t, np.eye(dims.m)), np.eye(dims.n))


def ad_commutation_residual(phi_like, W, M) -> float:
    """|| phi(W M W*) - W phi(M) W* ||_F at a single operator M."""
    W = as_complex(W)
    M = as_complex(M)
    left = apply(phi_like, W @ M @ W.conj().T)
    right = W @ apply(phi_like, M) @ W.conj().T
    return frobenius(left - right)


def _yy_sampling_dims(phi_like) -> Dims:
    if isinstance(phi_like, ExtendedSuperoperator):
        return phi_like.yy_dims
    if isinstance(phi_like, Superoperator):
        if phi_like.dims.m != phi_like.dims.n:
            raise DimensionError("commutation sampling needs a map on a square space")
        return phi_like.dims
    raise TypeError("expected an ExtendedSuperoperator or a square-space Superoperator")


def commutes_with_ad(phi_tilde, W, num_samples: int = 20, tol: float = 1e-9, seed=0) -> bool:
    """True iff phi_tilde commutes with M -> W M W* on sampled MES of Y (x) Y."""
    dims = _yy_sampling_dims(phi_tilde)
    for i in range(num_samples):
        A = random_coisometry(dims, np.random.SeedSequence([int(seed), 17, i]))
        if ad_commutation_residual(phi_tilde, W, pi(A).matrix) >= tol:
            return False
    return True


def off_block_rotation(dims: Dims) -> np.ndarray:
    """The unitary (1/sqrt2) [[I, I], [I, -I]] on the first two X-blocks of Y
    (identity elsewhere): the direction along which switch-form maps fail to
    commute with the first sign conjugation."""
    if dims.k < 2:
        raise DimensionError("needs at least two blocks")
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    out = np.zeros((dims.n, dims.n), dtype=complex)
    out[: 2 * dims.m, : 2 * dims.m] = kron(h, np.eye(dims.m))
    if dims.k > 2:
        out[2 * dims.m :, 2 * dims.m :] = np.eye(dims.m * (dims.k - 2))
    return out


def switch_commutation_witness(dims: Dims, U) -> np.ndarray:
    """Unitary A on Y with U A^T equal to :func:`off_block_rotation`, an MES
    direction exhibiting the failure of P_1-commutation for switch-form maps."""
    U = as_complex(U)
    h = off_block_rotation(dims)
    return (U.conj().T @ h).T
