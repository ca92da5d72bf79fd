"""Tests for the Hermitian eigensolver, Haar sampler and RNG streams."""

from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sas_entanglement.entanglement_measures import negativity
from sas_entanglement.exceptions import ValidationError
from sas_entanglement.linalg import (
    _off_diagonal_norm,
    eig_hermitian,
    haar_random_unitaries,
    haar_random_unitary,
    hermitian_sqrt,
    jacobi_eigh,
    make_rng,
    min_eigenvalue,
    random_density_matrix,
    random_hermitian,
    random_simplex,
    spawn_rngs,
    su_generators,
)
from sas_entanglement.models.domain import HermitianMatrix, SymmetricDensityMatrix
from sas_entanglement.symmetric_space import embed_full, partial_transpose


class TestEigHermitian:
    def test_identity(self):
        values, vectors = eig_hermitian(HermitianMatrix(np.eye(3)))
        np.testing.assert_allclose(values, [1.0, 1.0, 1.0], atol=1e-14)
        np.testing.assert_allclose(vectors.entries.conj().T @ vectors.entries, np.eye(3), atol=1e-14)

    def test_diagonal_is_sorted_descending(self):
        values, _ = eig_hermitian(HermitianMatrix(np.diag([0.2, 0.5, 0.3])))
        np.testing.assert_allclose(values, [0.5, 0.3, 0.2], atol=1e-14)

    def test_partial_transpose_of_dicke_one(self, dicke_one):
        pt = partial_transpose(embed_full(dicke_one))
        values, _ = eig_hermitian(pt)
        assert values[-1] == pytest.approx(-0.5, abs=1e-12)
        assert min_eigenvalue(pt) == pytest.approx(-0.5, abs=1e-12)

    @pytest.mark.parametrize("dim", [2, 3, 4, 5, 8])
    def test_reconstruction_and_orthonormality(self, dim, rng):
        for _ in range(20):
            m = HermitianMatrix(random_hermitian(dim, rng))
            values, vectors = eig_hermitian(m)
            v = vectors.entries
            assert np.all(np.diff(values) <= 0)
            np.testing.assert_allclose(v @ np.diag(values) @ v.conj().T, m.entries, atol=1e-10)
            np.testing.assert_allclose(v.conj().T @ v, np.eye(dim), atol=1e-10)
            assert np.sum(values) == pytest.approx(m.trace(), abs=1e-10)

    def test_recovers_prescribed_spectrum(self, rng):
        for _ in range(50):
            spectrum = np.sort(rng.uniform(-1.0, 1.0, 4))[::-1]
            u = haar_random_unitaries(4, 1, rng)[0]
            m = u @ np.diag(spectrum) @ u.conj().T
            values, _ = eig_hermitian(HermitianMatrix(0.5 * (m + m.conj().T)))
            np.testing.assert_allclose(values, spectrum, atol=1e-10)

    def test_degenerate_spectrum(self, rng):
        u = haar_random_unitaries(4, 1, rng)[0]
        m = u @ np.diag([0.4, 0.4, 0.1, 0.1]) @ u.conj().T
        values, _ = eig_hermitian(HermitianMatrix(0.5 * (m + m.conj().T)))
        np.testing.assert_allclose(values, [0.4, 0.4, 0.1, 0.1], atol=1e-10)

    def test_bell_like_state_converges(self, dicke_one):
        assert negativity(embed_full(dicke_one)).negativity == pytest.approx(1.0, abs=1e-12)
        _, vectors = jacobi_eigh(embed_full(dicke_one).entries)
        np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(4), atol=1e-12)

    def test_embedded_three_qubit_reconstruction(self, rng):
        for _ in range(20):
            rho = random_density_matrix(4, rng)
            full = embed_full(SymmetricDensityMatrix.from_array(3, 0.5 * (rho + rho.conj().T)))
            for m in (full, partial_transpose(full)):
                values, vectors = eig_hermitian(m)
                v = vectors.entries
                np.testing.assert_allclose(v @ np.diag(values) @ v.conj().T, m.entries, atol=1e-10)

    def test_off_diagonal_norm_has_no_cancellation_floor(self):
        a = np.diag([1.0e4, 1.0, -1.0e4]).astype(np.complex128)
        a[0, 1] = a[1, 0] = 1e-12
        assert _off_diagonal_norm(a) == pytest.approx(sqrt(2.0) * 1e-12, rel=1e-12)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValidationError):
            eig_hermitian(HermitianMatrix([[1.0, 1.0], [0.0, 1.0]]))

    def test_jacobi_matches_lapack(self, rng):
        m = random_hermitian(6, rng)
        values, _ = jacobi_eigh(m)
        np.testing.assert_allclose(np.sort(values), np.linalg.eigvalsh(m), atol=1e-10)

    @given(st.lists(st.floats(-5.0, 5.0, allow_nan=False), min_size=3, max_size=3))
    @settings(max_examples=40, deadline=None)
    def test_real_symmetric_property(self, entries):
        a, b, c = entries
        m = HermitianMatrix([[a, b, 0.0], [b, c, b], [0.0, b, a]])
        values, _ = eig_hermitian(m)
        np.testing.assert_allclose(values, np.sort(np.linalg.eigvalsh(m.entries))[::-1], atol=1e-10)


class TestHermitianSqrt:
    def test_square_root_of_density_matrix(self, rng):
        rho = random_density_matrix(4, rng)
        root = hermitian_sqrt(HermitianMatrix(0.5 * (rho + rho.conj().T)))
        np.testing.assert_allclose(root @ root, rho, atol=1e-10)


class TestHaar:
    def test_same_seed_same_matrix(self):
        first = haar_random_unitary(3, make_rng(42))
        second = haar_random_unitary(3, make_rng(42))
        np.testing.assert_array_equal(first.entries, second.entries)

    @pytest.mark.parametrize("dim", [3, 4])
    def test_unitary_with_unit_determinant(self, dim):
        for seed in range(1000):
            u = haar_random_unitary(dim, make_rng(seed)).entries
            assert np.max(np.abs(u @ u.conj().T - np.eye(dim))) < 1e-10
            assert abs(np.linalg.det(u) - 1.0) < 1e-10

    def test_first_moment(self):
        samples = haar_random_unitaries(3, 10_000, make_rng(7))
        assert np.mean(np.abs(samples[:, 0, 0]) ** 2) == pytest.approx(1.0 / 3.0, abs=0.02)

    def test_batches_share_a_prefix(self):
        long = haar_random_unitaries(4, 10, make_rng(5))
        short = haar_random_unitaries(4, 3, make_rng(5))
        np.testing.assert_allclose(long[:3], short, atol=1e-14)

    def test_unsupported_dimension(self, rng):
        with pytest.raises(ValidationError):
            haar_random_unitaries(5, 1, rng)


class TestStreams:
    def test_spawned_streams_are_reproducible_and_distinct(self):
        first = [g.standard_normal() for g in spawn_rngs(3, 4)]
        second = [g.standard_normal() for g in spawn_rngs(3, 4)]
        assert first == second
        assert len(set(first)) == 4

    def test_random_simplex_rows(self, rng):
        points = random_simplex(4, 100, rng)
        assert points.shape == (100, 4)
        np.testing.assert_allclose(points.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(np.diff(points, axis=1) <= 0)


@pytest.mark.parametrize("dim", [3, 4])
def test_su_generators_orthonormal_traceless(dim):
    generators = su_generators(dim)
    assert generators.shape == (dim * dim - 1, dim, dim)
    np.testing.assert_allclose(np.trace(generators, axis1=1, axis2=2), 0.0, atol=1e-14)
    np.testing.assert_allclose(generators, np.swapaxes(generators.conj(), 1, 2), atol=1e-14)
    gram = np.einsum("aij,bji->ab", generators, generators)
    np.testing.assert_allclose(gram, np.eye(dim * dim - 1), atol=1e-12)
