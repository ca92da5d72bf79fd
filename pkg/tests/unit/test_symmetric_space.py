"""Tests for the Dicke basis, the embedding and the partial transpose."""

from math import sqrt

import numpy as np
import pytest

from sas_entanglement.exceptions import ValidationError
from sas_entanglement.linalg import random_density_matrix, random_hermitian
from sas_entanglement.models.domain import HermitianMatrix, SymmetricDensityMatrix
from sas_entanglement.symmetric_space import (
    diagonal_state,
    dicke_basis,
    embed_full,
    maximally_mixed,
    partial_transpose,
    partial_transpose_array,
    swap_qubits,
)


def _random_symmetric_state(n_qubits, rng):
    rho = random_density_matrix(n_qubits + 1, rng)
    return SymmetricDensityMatrix.from_array(n_qubits, 0.5 * (rho + rho.conj().T))


class TestDickeBasis:
    def test_two_qubit_single_excitation(self):
        np.testing.assert_allclose(dicke_basis(2).vectors[1], [0.0, 1 / sqrt(2), 1 / sqrt(2), 0.0], atol=1e-15)

    def test_three_qubit_single_excitation(self):
        expected = np.zeros(8)
        expected[[1, 2, 4]] = 1 / sqrt(3)
        np.testing.assert_allclose(dicke_basis(3).vectors[1], expected, atol=1e-15)

    def test_all_plus_state(self):
        expected = np.zeros(8)
        expected[0] = 1.0
        np.testing.assert_array_equal(dicke_basis(3).vectors[0], expected)

    @pytest.mark.parametrize("n_qubits", [2, 3])
    def test_orthonormal_and_permutation_invariant(self, n_qubits):
        vectors = dicke_basis(n_qubits).vectors
        np.testing.assert_allclose(vectors @ vectors.T, np.eye(n_qubits + 1), atol=1e-12)
        for first in range(n_qubits):
            for second in range(first + 1, n_qubits):
                for vector in vectors:
                    np.testing.assert_allclose(swap_qubits(vector, n_qubits, first, second), vector, atol=1e-12)

    @pytest.mark.parametrize("n_qubits", [1, 4])
    def test_unsupported_sizes(self, n_qubits):
        with pytest.raises(ValidationError):
            dicke_basis(n_qubits)


class TestEmbedding:
    def test_maximally_mixed_two_qubits(self):
        full = embed_full(maximally_mixed(2))
        np.testing.assert_allclose(np.linalg.eigvalsh(full.entries), [0.0, 1 / 3, 1 / 3, 1 / 3], atol=1e-14)

    def test_all_plus_projector(self):
        full = embed_full(diagonal_state(2, (1.0, 0.0, 0.0)))
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        np.testing.assert_allclose(full.entries, expected, atol=1e-15)

    def test_three_qubit_rank_and_invariants(self, rng):
        for _ in range(20):
            rho = _random_symmetric_state(3, rng)
            full = embed_full(rho)
            assert full.dim == 8
            assert np.linalg.matrix_rank(full.entries, tol=1e-10) <= 4
            assert full.trace() == pytest.approx(1.0, abs=1e-12)
            assert full.purity() == pytest.approx(rho.matrix.purity(), abs=1e-12)
            padded = np.concatenate([rho.eigenvalues(), np.zeros(4)])
            np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(full.entries))[::-1], padded, atol=1e-12)


class TestPartialTranspose:
    def test_product_state_unchanged(self):
        full = HermitianMatrix(np.diag([0.0, 1.0, 0.0, 0.0]))
        np.testing.assert_array_equal(partial_transpose(full).entries, full.entries)

    @pytest.mark.parametrize("dim", [4, 8])
    def test_involution_and_trace(self, dim, rng):
        m = HermitianMatrix(random_hermitian(dim, rng))
        once = partial_transpose(m)
        np.testing.assert_array_equal(partial_transpose(once).entries, m.entries)
        assert once.trace() == pytest.approx(m.trace(), abs=1e-12)

    def test_bipartition_independence_for_symmetric_states(self, rng):
        for _ in range(20):
            full = embed_full(_random_symmetric_state(3, rng)).entries
            spectra = [np.linalg.eigvalsh(partial_transpose_array(full, cut)) for cut in range(3)]
            for other in spectra[1:]:
                np.testing.assert_allclose(other, spectra[0], atol=1e-10)

    def test_batched_matches_single(self, rng):
        stack = np.array([random_hermitian(8, rng) for _ in range(5)])
        batched = partial_transpose_array(stack, cut=1)
        for single, expected in zip(stack, batched, strict=True):
            np.testing.assert_array_equal(partial_transpose_array(single, cut=1), expected)

    def test_invalid_dimension(self, rng):
        with pytest.raises(ValidationError):
            partial_transpose_array(random_hermitian(3, rng))

    def test_invalid_cut(self, rng):
        with pytest.raises(ValidationError):
            partial_transpose_array(random_hermitian(4, rng), cut=2)
