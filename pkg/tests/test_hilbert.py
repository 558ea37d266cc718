import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urlab import hilbert
from urlab.errors import (
    DimMismatch,
    DimTooSmall,
    IndexOutOfRange,
    NonFiniteEntry,
    NonSquare,
    NotNearlyHermitian,
    NotNormalized,
)
from urlab.hilbert import (
    Operator,
    State,
    basis_state,
    commutator,
    eigendecompose,
    evolve,
    expectation,
    make_hermitian,
    matrix_element,
    pauli_x,
    pauli_y,
    pauli_z,
    phase_state,
    random_hermitian,
    random_state,
    truncated_oscillator,
)

dims = st.integers(min_value=2, max_value=8)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_make_hermitian_identity():
    op = make_hermitian(np.eye(3))
    np.testing.assert_array_equal(op.matrix, np.eye(3))


def test_make_hermitian_exact_input_unchanged():
    raw = np.array([[0, 1 + 1j], [1 - 1j, 2]])
    np.testing.assert_array_equal(make_hermitian(raw).matrix, raw)


@pytest.mark.parametrize(
    "raw, err",
    [
        (np.array([[0, 1], [0, 0]]), NotNearlyHermitian),
        (np.ones((2, 3)), NonSquare),
        (np.array([[np.nan, 0], [0, 1]]), NonFiniteEntry),
    ],
)
def test_make_hermitian_rejects(raw, err):
    with pytest.raises(err):
        make_hermitian(raw)


def test_pauli_z_eigenvector():
    v = basis_state(2, 0)
    np.testing.assert_array_equal(pauli_z() @ v, v.amplitudes)


def test_pauli_commutator_by_hand():
    # [[0,1],[1,0]] [[0,-i],[i,0]] = [[i,0],[0,-i]]; reversed product is its negative
    expected = np.array([[2j, 0], [0, -2j]])
    np.testing.assert_allclose(commutator(pauli_x(), pauli_y()), expected, atol=0)
    np.testing.assert_allclose(commutator(pauli_x(), pauli_y()), 2j * pauli_z().matrix)


def test_basis_state_bounds():
    with pytest.raises(IndexOutOfRange):
        basis_state(2, 2)
    with pytest.raises(IndexOutOfRange):
        basis_state(3, -1)


def test_state_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        State([1.0, 1.0])


def test_operator_rejects_non_hermitian():
    with pytest.raises(NotNearlyHermitian):
        Operator([[0, 1], [0, 0]])


def test_expectations_small():
    assert expectation(pauli_z(), basis_state(2, 0)) == 1.0
    assert expectation(pauli_x(), basis_state(2, 0)) == 0.0
    assert matrix_element(pauli_x(), basis_state(2, 0), basis_state(2, 1)) == 1.0


def test_dim_mismatch():
    with pytest.raises(DimMismatch):
        expectation(pauli_x(), basis_state(3, 0))
    with pytest.raises(DimMismatch):
        commutator(pauli_x(), random_hermitian(3, 0))


class TestTruncatedOscillator:
    def test_dim2_position(self):
        s = 1 / math.sqrt(2)
        np.testing.assert_allclose(truncated_oscillator(2).X.matrix, [[0, s], [s, 0]], atol=1e-15)

    @pytest.mark.parametrize("dim", [2, 3, 5, 10])
    def test_commutator_entries(self, dim):
        X, P = truncated_oscillator(dim)
        c = commutator(X, P)
        assert c[0, 0] == pytest.approx(1j, abs=1e-14)
        assert c[dim - 1, dim - 1] == pytest.approx(1j * (1 - dim), abs=1e-13)
        inner = c[: dim - 1, : dim - 1]
        np.testing.assert_allclose(inner, 1j * np.eye(dim - 1), atol=1e-13)

    def test_corner_deviation_reported(self):
        assert truncated_oscillator(6).corner_deviation == pytest.approx(6.0)

    def test_too_small(self):
        with pytest.raises(DimTooSmall):
            truncated_oscillator(1)


def test_self_and_identity_commutators():
    A = random_hermitian(4, 1)
    assert not np.any(commutator(A, A))
    np.testing.assert_allclose(commutator(A, hilbert.identity(4)), 0, atol=1e-15)


class TestEigendecompose:
    def test_pauli_z(self, kernel):
        s = eigendecompose(pauli_z())
        np.testing.assert_array_equal(s.eigenvalues, [-1, 1])
        assert abs(s.vectors[1, 0]) == 1.0
        assert abs(s.vectors[0, 1]) == 1.0

    def test_pauli_x_closed_form(self, kernel):
        s = eigendecompose(pauli_x())
        np.testing.assert_allclose(s.eigenvalues, [-1, 1], atol=1e-15)
        r = 1 / math.sqrt(2)
        for k, ref in enumerate(([r, -r], [r, r])):
            # equal up to a global phase
            assert abs(np.vdot(ref, s.vectors[:, k])) == pytest.approx(1.0, abs=1e-14)

    def test_random_6x6_residuals(self, kernel):
        A = random_hermitian(6, 42)
        s = eigendecompose(A)
        for k in range(6):
            v = s.vectors[:, k]
            assert np.linalg.norm(A.matrix @ v - s.eigenvalues[k] * v) <= 1e-10 * A.fro_norm
        np.testing.assert_allclose(s.vectors.conj().T @ s.vectors, np.eye(6), atol=1e-10)
        assert np.all(np.diff(s.eigenvalues) >= 0)

    def test_matches_lapack(self, kernel):
        # independent route: LAPACK eigenvalues
        for seed in range(20):
            A = random_hermitian(2 + seed % 7, seed)
            np.testing.assert_allclose(
                eigendecompose(A).eigenvalues, np.linalg.eigvalsh(A.matrix), atol=1e-12 * A.fro_norm
            )

    def test_degenerate_cluster_orthonormal(self, kernel):
        rng = np.random.default_rng(3)
        q, _ = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
        A = make_hermitian(q @ np.diag([1.0, 1.0, 1.0, 2.0, -3.0]) @ q.conj().T)
        s = eigendecompose(A)
        np.testing.assert_allclose(s.eigenvalues, [-3, 1, 1, 1, 2], atol=1e-12)
        np.testing.assert_allclose(s.vectors.conj().T @ s.vectors, np.eye(5), atol=1e-12)
        assert np.linalg.norm(s.reconstruct() - A.matrix) <= 1e-10 * A.fro_norm

    def test_zero_and_1x1(self, kernel):
        assert eigendecompose(Operator(np.zeros((3, 3)))).sweeps == 0
        np.testing.assert_array_equal(eigendecompose(Operator([[2.5]])).eigenvalues, [2.5])

    def test_backends_agree(self):
        from conftest import KERNELS

        if len(KERNELS) < 2:
            pytest.skip("compiled kernel not built")
        A = random_hermitian(7, 11)
        outs = []
        for fn in KERNELS.values():
            a = np.array(A.matrix, order="C")
            v = np.eye(7, dtype=complex)
            fn(a, v, 1e-14 * A.fro_norm, 100)
            outs.append(np.sort(a.diagonal().real))
        np.testing.assert_allclose(outs[0], outs[1], atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(dim=dims, seed=seeds)
def test_spectral_reconstruction(dim, seed):
    A = random_hermitian(dim, seed)
    s = eigendecompose(A)
    assert np.linalg.norm(s.reconstruct() - A.matrix) <= 1e-10 * A.fro_norm


class TestEvolve:
    def test_zero_time(self):
        phi = random_state(3, 5)
        np.testing.assert_allclose(evolve(random_hermitian(3, 6), phi, 0.0).amplitudes, phi.amplitudes, atol=1e-14)

    @pytest.mark.parametrize("t", [0.3, 1.0, -2.5])
    def test_eigenstate_phase(self, t):
        out = evolve(pauli_z(), basis_state(2, 0), t)
        np.testing.assert_allclose(out.amplitudes, [cmath.exp(-1j * t), 0], atol=1e-14)

    @pytest.mark.parametrize("t", [0.1, 0.7, 2.0, 5.0])
    def test_sigma_x_overlap(self, t):
        start = basis_state(2, 0)
        assert start.overlap(evolve(pauli_x(), start, t)) == pytest.approx(math.cos(t), abs=1e-14)

    def test_hbar_scales_time(self):
        H, phi = random_hermitian(4, 1), random_state(4, 2)
        a = evolve(H, phi, 1.0, hbar=2.0).amplitudes
        b = evolve(H, phi, 0.5, hbar=1.0).amplitudes
        np.testing.assert_allclose(a, b, atol=1e-13)

    def test_matches_scipy_expm(self):
        from scipy.linalg import expm

        H, phi = random_hermitian(5, 8), random_state(5, 9)
        ref = expm(-1j * 0.8 * H.matrix) @ phi.amplitudes
        np.testing.assert_allclose(evolve(H, phi, 0.8).amplitudes, ref, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(dim=dims, seed=seeds, t=st.floats(-10, 10), s=st.floats(-10, 10))
def test_unitarity_and_group_property(dim, seed, t, s):
    H = random_hermitian(dim, seed)
    phi = random_state(dim, seed + 1)
    once = evolve(H, phi, s + t)
    assert abs(np.linalg.norm(once.amplitudes) - 1) <= 1e-10
    twice = evolve(H, evolve(H, phi, s), t)
    assert np.linalg.norm(once.amplitudes - twice.amplitudes) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(dim=dims, seed=seeds)
def test_commutator_anti_hermitian(dim, seed):
    A, B = random_hermitian(dim, seed), random_hermitian(dim, seed + 7)
    c = commutator(A, B)
    assert np.linalg.norm(c + c.conj().T) <= 1e-12 * A.fro_norm * B.fro_norm


class TestRandom:
    def test_deterministic(self):
        np.testing.assert_array_equal(random_hermitian(4, 99).matrix, random_hermitian(4, 99).matrix)
        np.testing.assert_array_equal(random_state(4, 99).amplitudes, random_state(4, 99).amplitudes)

    def test_state_normalized(self):
        for s in range(10):
            assert abs(np.linalg.norm(random_state(4, s).amplitudes) - 1) <= 1e-12

    def test_hermitian_invariant(self):
        m = random_hermitian(5, 3).matrix
        assert np.max(np.abs(m - m.conj().T)) <= 1e-12

    def test_prng_recorded(self):
        assert "PCG64" in hilbert.PRNG_ALGORITHM


def test_phase_state():
    np.testing.assert_allclose(phase_state(math.pi / 2).amplitudes, np.array([1, 1j]) / math.sqrt(2))
