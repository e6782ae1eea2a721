import math

import numpy as np
import pytest

from lossdeph.fock import (
    GramFrame,
    HermitianOperator,
    binary_entropy,
    binom_weight,
    gram_spectrum,
    hermitian_eigensystem,
    hermitian_spectrum,
    partial_trace,
    partial_transpose,
    tensor,
    von_neumann_entropy,
)

RNG = np.random.default_rng(7)


def random_density(d, rng=RNG):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return HermitianOperator(rho / np.trace(rho).real, (d,))


class TestBinomWeight:
    def test_single_bernoulli(self):
        assert binom_weight(1, 0, 0.3) == pytest.approx(0.7, abs=1e-15)

    def test_deterministic(self):
        assert binom_weight(4, 4, 1.0) == 1.0

    def test_normalization(self):
        total = sum(binom_weight(10, l, 0.25) for l in range(11))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_normalization_large_n(self):
        total = sum(binom_weight(200, l, 0.37) for l in range(201))
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            binom_weight(3, 4, 0.5)


class TestPartialTrace:
    def test_product_vacuum(self):
        v = np.zeros((4, 4))
        v[0, 0] = 1.0
        out = partial_trace(HermitianOperator(v, (2, 2)), keep=[0])
        assert np.allclose(out.data, [[1, 0], [0, 0]])

    def test_maximally_entangled(self):
        phi = np.zeros((4, 4))
        for m in range(2):
            for n in range(2):
                phi[m * 2 + m, n * 2 + n] = 0.5
        out = partial_trace(HermitianOperator(phi, (2, 2)), keep=[0])
        assert np.allclose(out.data, np.eye(2) / 2)

    def test_three_party_product(self):
        a, b1, b2 = random_density(2), random_density(3), random_density(2)
        full = tensor(a, b1, b2)
        out = partial_trace(full, keep=[0, 1])
        assert np.allclose(out.data, tensor(a, b1).data, atol=1e-12)
        assert out.dims == (2, 3)

    def test_trace_preserved(self):
        rho = random_density(8)
        op = HermitianOperator(rho.data, (2, 2, 2))
        for keep in ([0], [1], [2], [0, 2], [1, 2]):
            out = partial_trace(op, keep=keep)
            assert abs(out.trace() - op.trace()) < 1e-12

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            partial_trace(random_density(4), keep=[1])


class TestPartialTranspose:
    def test_real_product_unchanged(self):
        a = random_density(2)
        b = HermitianOperator(np.array([[0.25, 0.1], [0.1, 0.75]]), (2,))
        full = tensor(a, b)
        out = partial_transpose(full, 1)
        assert np.allclose(out.data, full.data, atol=1e-14)

    def test_maximally_entangled_spectrum(self):
        phi = np.zeros((4, 4))
        for m in range(2):
            for n in range(2):
                phi[m * 2 + m, n * 2 + n] = 0.5
        out = partial_transpose(HermitianOperator(phi, (2, 2)), 1)
        assert hermitian_spectrum(out).min == pytest.approx(-0.5, abs=1e-12)

    def test_involutive(self):
        rho = random_density(6)
        op = HermitianOperator(rho.data, (2, 3))
        back = partial_transpose(partial_transpose(op, 0), 0)
        assert np.array_equal(back.data, op.data)

    def test_spectrum_matches_other_side(self):
        rho = random_density(6)
        op = HermitianOperator(rho.data, (2, 3))
        s0 = hermitian_spectrum(partial_transpose(op, 0)).eigenvalues
        s1 = hermitian_spectrum(partial_transpose(op, 1)).eigenvalues
        assert np.allclose(s0, s1, atol=1e-12)

    def test_trace_and_hermiticity_preserved(self):
        rho = random_density(4)
        op = HermitianOperator(rho.data, (2, 2))
        out = partial_transpose(op, 0)
        assert abs(out.trace() - 1) < 1e-12
        assert out.hermiticity_deviation() < 1e-12


class TestSpectrum:
    def test_diagonal(self):
        spec = hermitian_spectrum(HermitianOperator(np.diag([3.0, 1.0, 2.0]), (3,)))
        assert np.allclose(spec.eigenvalues, [1, 2, 3])

    def test_two_by_two_closed_form(self):
        b, c = 0.4, 0.35
        spec = hermitian_spectrum(HermitianOperator(np.array([[0, c], [c, b]]), (2,)))
        root = math.sqrt(b * b + 4 * c * c)
        assert np.allclose(spec.eigenvalues, [(b - root) / 2, (b + root) / 2], atol=1e-14)

    def test_pauli_x(self):
        spec = hermitian_spectrum(HermitianOperator(np.array([[0, 1], [1, 0]]), (2,)))
        assert np.allclose(spec.eigenvalues, [-1, 1])

    def test_reconstruction_residual(self):
        rho = random_density(9)
        spec, vecs = hermitian_eigensystem(rho)
        rebuilt = (vecs * spec.eigenvalues) @ vecs.conj().T
        assert np.max(np.abs(rebuilt - rho.data)) < 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_spectrum(HermitianOperator(np.array([[0, 1], [0, 0]]), (2,)))


class TestEntropy:
    def test_pure_state(self):
        v = np.zeros((3, 3))
        v[1, 1] = 1.0
        assert von_neumann_entropy(HermitianOperator(v, (3,))) == 0.0

    def test_maximally_mixed_qubit(self):
        assert von_neumann_entropy(
            HermitianOperator(np.eye(2) / 2, (2,))
        ) == pytest.approx(1.0, abs=1e-12)

    def test_binary(self):
        rho = HermitianOperator(np.diag([0.25, 0.75]), (2,))
        assert von_neumann_entropy(rho) == pytest.approx(0.811278, abs=1e-6)
        assert von_neumann_entropy(rho) == pytest.approx(binary_entropy(0.25), abs=1e-14)

    @pytest.mark.parametrize("da,db", [(2, 2), (2, 3), (3, 3)])
    def test_additive_on_products(self, da, db):
        a, b = random_density(da), random_density(db)
        lhs = von_neumann_entropy(tensor(a, b))
        rhs = von_neumann_entropy(a) + von_neumann_entropy(b)
        assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            von_neumann_entropy(HermitianOperator(np.diag([1.1, -0.1]), (2,)))


class TestGramFrame:
    def test_diagonal_ones_and_psd(self):
        frame = GramFrame.loss_dephasing(0.7, 6)
        assert np.allclose(np.diag(frame.gram), 1.0)
        assert np.linalg.eigvalsh(frame.gram)[0] >= -1e-9

    def test_label_order_constraint(self):
        with pytest.raises(ValueError):
            GramFrame(((2, 1),), np.eye(1), 0.5)

    def test_orthogonal_weights(self):
        frame = GramFrame(((0, 0), (1, 1)), np.eye(2), 0.0)
        spec = gram_spectrum([0.3, 0.7], frame)
        assert np.allclose(spec.eigenvalues, [0.3, 0.7])

    def test_identical_vectors_collapse(self):
        frame = GramFrame(((0, 0), (0, 0)), np.ones((2, 2)), 0.0)
        spec = gram_spectrum([0.5, 0.5], frame)
        assert np.allclose(spec.eigenvalues, [0.0, 1.0], atol=1e-12)

    def test_negative_weight_rejected(self):
        frame = GramFrame(((0, 0), (1, 1)), np.eye(2), 0.0)
        with pytest.raises(ValueError):
            gram_spectrum([-0.1, 1.1], frame)

    def test_dense_embedding_oracle(self):
        # three-vector frame of the environment output of a two-level input
        gamma, lam, p = 1.0, 0.4, 0.35
        labels = ((0, 0), (0, 1), (1, 1))
        gram = np.eye(3)
        gram[0, 1] = gram[1, 0] = math.exp(-gamma / 2.0)
        frame = GramFrame(labels, gram, gamma)
        weights = np.array([p, (1 - p) * lam, (1 - p) * (1 - lam)])
        spec = gram_spectrum(weights, frame)

        from lossdeph.fock import coherent_state_vector

        cutoff = 20
        dense = np.zeros((2 * cutoff, 2 * cutoff))
        for w, (l, n) in zip(weights, labels):
            fock = np.zeros(2)
            fock[l] = 1.0
            vec = np.kron(fock, coherent_state_vector(math.sqrt(gamma) * n, cutoff))
            dense += w * np.outer(vec, vec)
        dense_spec = np.linalg.eigvalsh(dense)
        assert np.allclose(dense_spec[-3:], spec.eigenvalues, atol=1e-9)
        assert spec.sum == pytest.approx(float(np.sum(weights)), abs=1e-12)
