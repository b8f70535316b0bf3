"""Numerical verification suite for the structural identities the pipeline
rests on.  Each check returns its worst residual over randomized instances;
the CLI aggregates them into a machine-readable report.

Count-style checks (set equivalences, membership biconditionals) report the
number of disagreements as the residual, so 0.0 means a clean pass at any
positive tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .choi import align_images, choi_matrix, restricted_g
from .extension import ad_commutation_residual, extend, p_operator, q_operator
from .states import is_coisometry, orthogonal_family, pi, random_coisometry
from .superop import SigmaFlag, Superoperator, apply, make_adjoint_preserver, make_swap_preserver
from .tensor import (
    Dims,
    frobenius,
    haar_unitary,
    kron,
    partial_trace_y,
    rank_one_factor,
    unvec,
    vec,
)

_BOTH_SIGMA = (SigmaFlag.IDENTITY, SigmaFlag.TRANSPOSE)


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_residual: float
    passed: bool

    def to_obj(self) -> dict:
        return {"name": self.name, "max_residual": self.max_residual, "pass": self.passed}


def _rng(seed, *path) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *path]))


def _complex_matrix(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def _random_preserver(dims: Dims, sigma: SigmaFlag, seed, *path) -> Superoperator:
    u = haar_unitary(dims.m, np.random.SeedSequence([int(seed), *path, 0]))
    v = haar_unitary(dims.n, np.random.SeedSequence([int(seed), *path, 1]))
    return make_adjoint_preserver(u, v, sigma)


def check_vec_partial_trace(dims: Dims, samples: int, seed) -> float:
    """tr_Y(vec(A) vec(B)*) = A B* for arbitrary operators A, B: Y -> X."""
    rng = _rng(seed, 101)
    worst = 0.0
    for _ in range(samples):
        a = _complex_matrix(rng, dims.m, dims.n)
        b = _complex_matrix(rng, dims.m, dims.n)
        lhs = partial_trace_y(np.outer(vec(a), vec(b).conj()), dims)
        worst = max(worst, frobenius(lhs - a @ b.conj().T))
    return worst


def check_mes_partial_trace(dims: Dims, samples: int, seed) -> float:
    """tr_Y = I/m on MES and (tr/m) I on the span of MES."""
    rng = _rng(seed, 102)
    eye = np.eye(dims.m)
    worst = 0.0
    for i in range(samples):
        states = [
            pi(random_coisometry(dims, np.random.SeedSequence([int(seed), 102, i, j]))).matrix
            for j in range(3)
        ]
        worst = max(worst, frobenius(partial_trace_y(states[0], dims) - eye / dims.m))
        coeff = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        combo = sum(c * s for c, s in zip(coeff, states))
        expected = (np.trace(combo) / dims.m) * eye
        worst = max(worst, frobenius(partial_trace_y(combo, dims) - expected))
    return worst


def check_pure_states_in_span(dims: Dims, samples: int, seed) -> float:
    """A rank-1 trace-1 PSD operator has tr_Y = I/m exactly when its rank-1
    factor rescales to a coisometry; disagreements are counted, and the
    extraction residual on the positive side is included."""
    rng = _rng(seed, 103)
    disagreements = 0
    worst = 0.0
    for i in range(samples):
        if i % 2 == 0:
            state = pi(random_coisometry(dims, np.random.SeedSequence([int(seed), 103, i])))
            mat = state.matrix
        else:
            u = rng.standard_normal(dims.mn) + 1j * rng.standard_normal(dims.mn)
            u /= np.linalg.norm(u)
            mat = np.outer(u, u.conj())
        ptrace_ok = frobenius(partial_trace_y(mat, dims) - np.eye(dims.m) / dims.m) < 1e-8
        v, _ = rank_one_factor(mat, 1e-8)
        candidate = np.sqrt(dims.m) * unvec(v, dims.m, dims.n)
        coiso_ok = is_coisometry(candidate, 1e-8)
        if ptrace_ok != coiso_ok:
            disagreements += 1
        if ptrace_ok and coiso_ok:
            worst = max(
                worst,
                frobenius(candidate @ candidate.conj().T - np.eye(dims.m)),
            )
    return max(worst, float(disagreements))


def _five_way_conditions(A1: np.ndarray, A2: np.ndarray, rng, tol: float = 1e-9) -> list[bool]:
    m = A1.shape[0]
    c1 = frobenius(A1 @ A2.conj().T) < tol
    c2 = frobenius(A2 @ A1.conj().T) < tol
    c3 = is_coisometry(np.vstack([A1, A2]), tol)
    c4 = True
    for _ in range(20):
        ab = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        ab /= np.linalg.norm(ab)
        c4 = c4 and is_coisometry(ab[0] * A1 + ab[1] * A2, tol)
    # row spaces via orthonormal bases, independent of the product tests above
    q1 = np.linalg.qr(A1.conj().T)[0]
    q2 = np.linalg.qr(A2.conj().T)[0]
    c5 = frobenius(q1.conj().T @ q2) < tol * 10 * m
    return [c1, c2, c3, c4, c5]


def check_orthogonality_equivalence(dims: Dims, samples: int, seed) -> float:
    """Five-way equivalence for orthogonal coisometry pairs, with
    non-orthogonal pairs as negative controls; residual = #disagreements."""
    rng = _rng(seed, 104)
    disagreements = 0
    for i in range(samples):
        family = orthogonal_family(dims, np.random.SeedSequence([int(seed), 104, i]))
        conds = _five_way_conditions(family[0].matrix, family[1].matrix, rng)
        if not all(conds):
            disagreements += 1
        b1 = random_coisometry(dims, np.random.SeedSequence([int(seed), 105, i, 0]))
        b2 = random_coisometry(dims, np.random.SeedSequence([int(seed), 105, i, 1]))
        conds = _five_way_conditions(b1.matrix, b2.matrix, rng)
        if any(conds):
            disagreements += 1
    return float(disagreements)


def check_choi_discriminant(dims: Dims, samples: int, seed) -> float:
    """det J(G) sits at 0 for identity-branch preservers and -1 for
    transpose-branch preservers, for every orthogonal pair used to build G."""
    worst = 0.0
    for i in range(samples):
        for sigma in _BOTH_SIGMA:
            phi = _random_preserver(dims, sigma, seed, 106, i)
            family = orthogonal_family(dims, np.random.SeedSequence([int(seed), 107, i]))
            det = complex(np.linalg.det(choi_matrix(restricted_g(phi, family[0], family[1]))))
            target = 0.0 if sigma is SigmaFlag.IDENTITY else -1.0
            worst = max(worst, abs(det - target))
    return worst


def check_pair_semilinearity(dims: Dims, samples: int, seed) -> float:
    """On the span of an orthogonal pair, the induced map acts linearly
    (identity branch) or conjugate-linearly (transpose branch) on
    coefficients."""
    rng = _rng(seed, 108)
    worst = 0.0
    for i in range(samples):
        for sigma in _BOTH_SIGMA:
            phi = _random_preserver(dims, sigma, seed, 109, i)
            family = orthogonal_family(dims, np.random.SeedSequence([int(seed), 110, i]))
            pair = [family[0], family[1]]
            images = align_images(phi, pair)
            ab = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            ab /= np.linalg.norm(ab)
            coeff = ab.conj() if sigma is SigmaFlag.TRANSPOSE else ab
            source = ab[0] * pair[0].matrix + ab[1] * pair[1].matrix
            target = coeff[0] * images[0].matrix + coeff[1] * images[1].matrix
            worst = max(
                worst,
                frobenius(apply(phi, pi(source, dims).matrix) - pi(target, dims).matrix),
            )
    return worst


def check_polarization(dims: Dims, samples: int, seed) -> float:
    """A B* is exactly the alternating average of the four (A + i^l B) squares."""
    rng = _rng(seed, 111)
    worst = 0.0
    for _ in range(samples):
        a = _complex_matrix(rng, dims.m, dims.n)
        b = _complex_matrix(rng, dims.m, dims.n)
        total = np.zeros((dims.m, dims.m), dtype=complex)
        for ell in range(4):
            c = a + (1j**ell) * b
            total += (1j**ell) * (c @ c.conj().T)
        worst = max(worst, frobenius(total / 4.0 - a @ b.conj().T))
    return worst


def check_family_alignment(dims: Dims, samples: int, seed) -> float:
    """Aligned image families stay mutually orthogonal and reproduce the
    k-term (conjugate-)linear action on coefficients."""
    rng = _rng(seed, 112)
    worst = 0.0
    for i in range(samples):
        for sigma in _BOTH_SIGMA:
            phi = _random_preserver(dims, sigma, seed, 113, i)
            family = orthogonal_family(dims, np.random.SeedSequence([int(seed), 114, i]))
            images = align_images(phi, family)
            for p in range(dims.k):
                for q in range(dims.k):
                    expect = np.eye(dims.m) if p == q else np.zeros((dims.m, dims.m))
                    worst = max(
                        worst,
                        frobenius(images[p].matrix @ images[q].matrix.conj().T - expect),
                    )
            coeff = rng.standard_normal(dims.k) + 1j * rng.standard_normal(dims.k)
            coeff /= np.linalg.norm(coeff)
            out_coeff = coeff.conj() if sigma is SigmaFlag.TRANSPOSE else coeff
            source = sum(c * f.matrix for c, f in zip(coeff, family))
            target = sum(c * b.matrix for c, b in zip(out_coeff, images))
            worst = max(
                worst,
                frobenius(apply(phi, pi(source, dims).matrix) - pi(target, dims).matrix),
            )
    return worst


def check_extension_preserves_mes(dims: Dims, samples: int, seed) -> float:
    """The blockwise extension maps MES of Y (x) Y to MES of Y (x) Y."""
    worst = 0.0
    for sigma in _BOTH_SIGMA:
        phi = _random_preserver(dims, sigma, seed, 115)
        ext = extend(phi, sigma)
        for i in range(samples):
            state = pi(random_coisometry(ext.yy_dims, np.random.SeedSequence([int(seed), 116, i])))
            image = apply(ext, state.matrix)
            _, rank1_residual = rank_one_factor(image, 1e-6)
            ptrace_dev = frobenius(
                partial_trace_y(image, ext.yy_dims) - np.eye(dims.n) / dims.n
            )
            worst = max(worst, rank1_residual, ptrace_dev)
    return worst


def check_structural_commutation(dims: Dims, samples: int, seed) -> float:
    """The extension commutes with conjugation by every P_j (x) I and Q_pq."""
    eye_n = np.eye(dims.n)
    operators = [kron(p_operator(j, dims), eye_n) for j in range(1, dims.k + 1)]
    operators += [
        q_operator(p, q, dims) for p in range(1, dims.k + 1) for q in range(p + 1, dims.k + 1)
    ]
    worst = 0.0
    for sigma in _BOTH_SIGMA:
        phi = _random_preserver(dims, sigma, seed, 117)
        ext = extend(phi, sigma)
        for i in range(samples):
            state = pi(random_coisometry(ext.yy_dims, np.random.SeedSequence([int(seed), 118, i])))
            for w in operators:
                worst = max(worst, ad_commutation_residual(ext, w, state.matrix))
    return worst


def check_switch_identities(dims: Dims, samples: int, seed) -> float:
    """Switch/transpose/conjugation action on projections of unitaries:
    S(pi_A) = pi_{A^T}, (pi_A)^T = pi_{conj(A)}, ad_{U (x) V}(pi_A) = pi_{U A V^T}."""
    n = dims.n
    square = Dims(m=n, n=n, k=1)
    switch = make_swap_preserver(np.eye(n), np.eye(n), SigmaFlag.IDENTITY)
    worst = 0.0
    for i in range(samples):
        a = haar_unitary(n, np.random.SeedSequence([int(seed), 119, i, 0]))
        u = haar_unitary(n, np.random.SeedSequence([int(seed), 119, i, 1]))
        v = haar_unitary(n, np.random.SeedSequence([int(seed), 119, i, 2]))
        state = pi(a, square).matrix
        worst = max(worst, frobenius(apply(switch, state) - pi(a.T, square).matrix))
        worst = max(worst, frobenius(state.T - pi(a.conj(), square).matrix))
        w = kron(u, v)
        worst = max(
            worst,
            frobenius(w @ state @ w.conj().T - pi(u @ a @ v.T, square).matrix),
        )
    return worst


_CHECKS = [
    ("vec-partial-trace-product", check_vec_partial_trace),
    ("mes-partial-trace-identity", check_mes_partial_trace),
    ("pure-states-in-span", check_pure_states_in_span),
    ("orthogonality-equivalence", check_orthogonality_equivalence),
    ("choi-discriminant", check_choi_discriminant),
    ("pair-semilinearity", check_pair_semilinearity),
    ("polarization-reconstruction", check_polarization),
    ("family-alignment", check_family_alignment),
    ("extension-preserves-mes", check_extension_preserves_mes),
    ("structural-commutation", check_structural_commutation),
    ("switch-transpose-adjoint-identities", check_switch_identities),
]


def run_all(dims: Dims, tol: float = 1e-9, samples: int = 20, seed: int = 0) -> list[CheckResult]:
    """Run every structural check at the given dimensions."""
    results = []
    for name, func in _CHECKS:
        residual = float(func(dims, samples, seed))
        results.append(CheckResult(name=name, max_residual=residual, passed=residual < tol))
    return results
