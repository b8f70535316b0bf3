import numpy as np
import pytest

from meskit import (
    DimensionError,
    Dims,
    SigmaFlag,
    ad_commutation_residual,
    apply,
    block_join,
    block_split,
    commutes_with_ad,
    extend,
    haar_unitary,
    identity_superop,
    is_mes,
    kron,
    make_adjoint_preserver,
    make_swap_preserver,
    off_block_rotation,
    p_operator,
    pi,
    q_operator,
    random_coisometry,
    switch_commutation_witness,
)
from conftest import complex_gaussian, unitary_pair

DIMS = Dims.from_mk(2, 2)
BOTH = (SigmaFlag.IDENTITY, SigmaFlag.TRANSPOSE)


def _preserver(seed, sigma, dims=DIMS):
    return make_adjoint_preserver(*unitary_pair(dims, seed), sigma)


def test_block_split_join_convention(rng):
    m = complex_gaussian(rng, 16, 16)
    blocks = block_split(m, DIMS)
    assert blocks.shape == (2, 2, 8, 8)
    # block (p, q) occupies rows p*mn..(p+1)*mn and the matching columns
    np.testing.assert_array_equal(blocks[1, 0], m[8:16, 0:8])
    np.testing.assert_array_equal(block_join(blocks, DIMS), m)


def test_extend_identity_is_identity():
    ext = extend(identity_superop(DIMS), SigmaFlag.IDENTITY)
    np.testing.assert_allclose(ext.matrix, np.eye(256), atol=1e-14)


def test_extend_rejects_single_block():
    square = Dims(m=2, n=2, k=1)
    phi = make_adjoint_preserver(np.eye(2), np.eye(2), SigmaFlag.IDENTITY)
    assert phi.dims == square
    with pytest.raises(DimensionError):
        extend(phi, SigmaFlag.IDENTITY)


@pytest.mark.parametrize("sigma", BOTH)
def test_extend_acts_blockwise(sigma, rng):
    phi = _preserver(3, sigma)
    ext = extend(phi, sigma)
    m = complex_gaussian(rng, 16, 16)
    out_blocks = block_split(apply(ext, m), DIMS)
    in_blocks = block_split(m, DIMS)
    for p in range(2):
        for q in range(2):
            source = in_blocks[q, p] if sigma is SigmaFlag.TRANSPOSE else in_blocks[p, q]
            np.testing.assert_allclose(out_blocks[p, q], apply(phi, source), atol=1e-11)
    # the (1,1) block is diagonal, hence the same in both branches
    np.testing.assert_allclose(out_blocks[0, 0], apply(phi, in_blocks[0, 0]), atol=1e-11)


@pytest.mark.parametrize("sigma", BOTH)
def test_extend_preserves_square_mes(sigma):
    phi = _preserver(5, sigma)
    ext = extend(phi, sigma)
    for seed in range(25):
        state = pi(random_coisometry(ext.yy_dims, seed)).matrix
        assert is_mes(apply(ext, state), ext.yy_dims, 1e-8)


@pytest.mark.parametrize("sigma", BOTH)
def test_extend_consistency_with_block_diagonal_conjugation(sigma):
    # extending ad_{U (x) V} (with the matching branch flag) equals the
    # square-space conjugation by (I_k (x) U) (x) V
    u, v = unitary_pair(DIMS, 7)
    ext = extend(make_adjoint_preserver(u, v, sigma), sigma)
    big = make_adjoint_preserver(kron(np.eye(2), u), v, sigma)
    assert np.linalg.norm(ext.matrix - big.matrix) < 1e-10


def test_p_operator_formula_and_involution():
    dims = Dims.from_mk(1, 2)
    np.testing.assert_array_equal(p_operator(1, dims), np.diag([-1.0, 1.0]))
    dims = Dims.from_mk(2, 3)
    for j in range(1, 4):
        p = p_operator(j, dims)
        np.testing.assert_allclose(p @ p, np.eye(6), atol=1e-14)
        np.testing.assert_allclose(p @ p.conj().T, np.eye(6), atol=1e-14)
        np.testing.assert_array_equal(p, p.conj().T)
    with pytest.raises(IndexError):
        p_operator(4, dims)


def test_q_operator_formula_and_involution():
    dims = Dims.from_mk(1, 2)
    t12 = np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_array_equal(q_operator(1, 2, dims), kron(t12, np.eye(2)))
    dims = Dims.from_mk(2, 3)
    q = q_operator(1, 3, dims)
    np.testing.assert_allclose(q @ q, np.eye(36), atol=1e-14)
    with pytest.raises(IndexError):
        q_operator(2, 2, dims)


def test_q_operator_swaps_blocks(rng):
    q = q_operator(1, 2, DIMS)
    m = complex_gaussian(rng, 16, 16)
    swapped = block_split(q @ m @ q.conj().T, DIMS)
    blocks = block_split(m, DIMS)
    np.testing.assert_allclose(swapped[0, 0], blocks[1, 1], atol=1e-12)
    np.testing.assert_allclose(swapped[1, 1], blocks[0, 0], atol=1e-12)
    np.testing.assert_allclose(swapped[0, 1], blocks[1, 0], atol=1e-12)


@pytest.mark.parametrize("sigma", BOTH)
def test_extension_commutes_with_structural_conjugations(sigma):
    dims = Dims.from_mk(2, 3)
    ext = extend(_preserver(9, sigma, dims), sigma)
    eye_n = np.eye(dims.n)
    for j in range(1, dims.k + 1):
        assert commutes_with_ad(ext, kron(p_operator(j, dims), eye_n))
    for p in range(1, dims.k + 1):
        for q in range(p + 1, dims.k + 1):
            assert commutes_with_ad(ext, q_operator(p, q, dims))


def test_switch_form_fails_sign_commutation_with_witness():
    # the square-space switch form is ruled out exactly because it fails this
    # commutation; the rotation witness below exhibits the failure directly
    u = haar_unitary(4, 11)
    v = haar_unitary(4, 13)
    psi = make_swap_preserver(u, v, SigmaFlag.IDENTITY)
    w = kron(p_operator(1, DIMS), np.eye(4))
    a = switch_commutation_witness(DIMS, u)
    assert np.linalg.norm(a @ a.conj().T - np.eye(4)) < 1e-12
    state = pi(a, Dims(m=4, n=4, k=1)).matrix
    assert ad_commutation_residual(psi, w, state) > 0.1
    assert not commutes_with_ad(psi, w)


def test_switch_witness_construction():
    u = haar_unitary(4, 15)
    a = switch_commutation_witness(DIMS, u)
    np.testing.assert_allclose(u @ a.T, off_block_rotation(DIMS), atol=1e-12)


def test_square_space_projection_identities():
    # switch, transpose and conjugation act on projections of unitaries as
    # transpose, complex conjugation, and U A V^T respectively
    n = 4
    square = Dims(m=n, n=n, k=1)
    switch = make_swap_preserver(np.eye(n), np.eye(n), SigmaFlag.IDENTITY)
    for seed in range(50):
        a = haar_unitary(n, np.random.SeedSequence([seed, 0]))
        u = haar_unitary(n, np.random.SeedSequence([seed, 1]))
        v = haar_unitary(n, np.random.SeedSequence([seed, 2]))
        state = pi(a, square).matrix
        assert np.linalg.norm(apply(switch, state) - pi(a.T, square).matrix) < 1e-10
        assert np.linalg.norm(state.T - pi(a.conj(), square).matrix) < 1e-10
        w = kron(u, v)
        conj = w @ state @ w.conj().T
        assert np.linalg.norm(conj - pi(u @ a @ v.T, square).matrix) < 1e-10
