"""Tensor-core operations: products, partial traces, spectra, expectations."""

import numpy as np
import pytest

from oltsim import dag, expectation, herm_eigenvalues, kron, kron_all, partial_trace
from oltsim.gates import pauli
from oltsim.states import make_bell_state, make_classical_correlated, make_werner

I2 = np.eye(2, dtype=complex)


def random_hermitian(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return g + dag(g)


def random_unitary(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q @ np.diag(np.diag(r) / np.abs(np.diag(r)))


class TestKron:
    def test_identity_case(self):
        assert np.array_equal(kron(I2, I2), np.eye(4))

    def test_diagonal_product(self):
        assert np.array_equal(kron(pauli(3), pauli(3)), np.diag([1, -1, -1, 1]).astype(complex))

    def test_x_with_z_block_structure(self):
        # expanded by hand from the definition: off-diagonal blocks carry z
        expected = np.zeros((4, 4), dtype=complex)
        expected[0:2, 2:4] = pauli(3)
        expected[2:4, 0:2] = pauli(3)
        assert np.array_equal(kron(pauli(1), pauli(3)), expected)

    def test_associative_and_trace_multiplicative(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            a = random_hermitian(rng, 2)
            b = random_hermitian(rng, 4)
            c = random_hermitian(rng, 2)
            left = kron(kron(a, b), c)
            right = kron(a, kron(b, c))
            assert np.allclose(left, right, atol=1e-12)
            assert np.isclose(np.trace(kron(a, b)), np.trace(a) * np.trace(b), atol=1e-9)

    def test_bilinear(self):
        rng = np.random.default_rng(7)
        a, b, c = (random_hermitian(rng, 2) for _ in range(3))
        assert np.allclose(kron(a + 2 * b, c), kron(a, c) + 2 * kron(b, c), atol=1e-12)
        assert np.allclose(kron(c, a + 2 * b), kron(c, a) + 2 * kron(c, b), atol=1e-12)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            kron(np.ones((2, 3)), I2)


class TestPartialTrace:
    def test_bell_marginal_is_maximally_mixed(self):
        rho = make_bell_state("phi+").matrix
        assert np.allclose(partial_trace(rho, {0}, 2), I2 / 2, atol=1e-12)

    def test_product_state_marginal(self):
        rng = np.random.default_rng(3)
        a = random_hermitian(rng, 4)
        chi = make_werner(0.3).matrix  # unit trace
        assert np.allclose(partial_trace(np.kron(a, chi), {0, 1}, 4), a, atol=1e-12)

    def test_keep_all_is_identity(self):
        rng = np.random.default_rng(5)
        rho = random_hermitian(rng, 8)
        assert np.array_equal(partial_trace(rho, {0, 1, 2}, 3), rho)

    def test_trace_preserving(self):
        rng = np.random.default_rng(9)
        rho = random_hermitian(rng, 16)
        for keep in ({0}, {1, 3}, {0, 2}, set()):
            assert np.isclose(
                np.trace(partial_trace(rho, keep, 4)), np.trace(rho), atol=1e-12
            )

    def test_linear(self):
        rng = np.random.default_rng(13)
        a = random_hermitian(rng, 8)
        b = random_hermitian(rng, 8)
        lhs = partial_trace(a + 3 * b, {1}, 3)
        rhs = partial_trace(a, {1}, 3) + 3 * partial_trace(b, {1}, 3)
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            partial_trace(np.eye(4, dtype=complex), {2}, 2)


class TestExpectation:
    def test_computational_eigenstate(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = 1.0
        assert expectation(kron(pauli(3), pauli(3)), rho) == pytest.approx(1.0, abs=1e-12)

    def test_classically_correlated_eigenvalue_one(self):
        rho = make_classical_correlated(2).matrix
        assert expectation(kron(pauli(3), pauli(3)), rho) == pytest.approx(1.0, abs=1e-12)

    def test_werner_parity(self):
        # identity part traceless against z x z, singlet contributes -p
        rho = make_werner(0.7).matrix
        assert expectation(kron(pauli(3), pauli(3)), rho) == pytest.approx(-0.7, abs=1e-12)

    def test_linear_in_both_arguments(self):
        rng = np.random.default_rng(21)
        a, b = random_hermitian(rng, 4), random_hermitian(rng, 4)
        r, s = random_hermitian(rng, 4), random_hermitian(rng, 4)
        assert expectation(a + 2 * b, r) == pytest.approx(
            expectation(a, r) + 2 * expectation(b, r), abs=1e-9
        )
        assert expectation(a, r + 2 * s) == pytest.approx(
            expectation(a, r) + 2 * expectation(a, s), abs=1e-9
        )

    def test_imaginary_residue_rejected(self):
        # a non-Hermitian state sneaks past the observable check and must be
        # caught by the trace-reality assertion
        skewed = np.array([[0, 1], [0, 0]], dtype=complex) * 1j
        with pytest.raises(ValueError, match="imaginary residue"):
            expectation(pauli(1), skewed)

    def test_non_hermitian_observable_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            expectation(np.array([[0, 1], [0, 0]], dtype=complex), I2 / 2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            expectation(pauli(3), np.eye(4, dtype=complex) / 4)


class TestHermEigenvalues:
    def test_pauli_z(self):
        assert np.allclose(herm_eigenvalues(pauli(3)), [-1.0, 1.0], atol=1e-12)

    def test_maximally_mixed_qubit(self):
        assert np.allclose(herm_eigenvalues(I2 / 2), [0.5, 0.5], atol=1e-12)

    def test_partial_transpose_of_singlet(self):
        # spectrum {(1-3p)/4, (1+p)/4 x3} at p=1 gives {-1/2, 1/2, 1/2, 1/2}
        rho = make_werner(1.0).matrix
        pt = rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
        assert np.allclose(herm_eigenvalues(pt), [-0.5, 0.5, 0.5, 0.5], atol=1e-9)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            herm_eigenvalues(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_unitary_invariance(self):
        rng = np.random.default_rng(33)
        for _ in range(10):
            m = random_hermitian(rng, 8)
            u = random_unitary(rng, 8)
            before = herm_eigenvalues(m)
            after = herm_eigenvalues(u @ m @ dag(u))
            assert np.allclose(before, after, atol=1e-9)


def test_kron_all_chain():
    assert np.array_equal(kron_all([pauli(3)] * 2), np.diag([1, -1, -1, 1]).astype(complex))
    with pytest.raises(ValueError):
        kron_all([])
