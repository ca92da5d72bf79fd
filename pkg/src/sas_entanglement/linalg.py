"""Small dense complex linear algebra: Hermitian eigensolver, Haar unitaries, RNG streams.

Random numbers come from numpy's PCG64 bit generator. A seed is turned into a
``SeedSequence``; independent streams for restarts, spectra or batches are its
``spawn`` children, so every result is a function of the master seed alone.
"""

from functools import lru_cache

import numpy as np

from sas_entanglement.config import get_logger, get_tolerances
from sas_entanglement.exceptions import ConvergenceError, ValidationError
from sas_entanglement.models.domain import (
    ComplexArray,
    ComplexMatrix,
    FloatArray,
    HermitianMatrix,
    UnitaryMatrix,
)

logger = get_logger(__name__)

Seed = int | np.random.SeedSequence


def make_rng(seed: Seed) -> np.random.Generator:
    """PCG64 generator for a seed or seed sequence."""
    sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(sequence))


def spawn_rngs(seed: Seed, count: int) -> list[np.random.Generator]:
    """Split ``count`` independent child streams off a master seed."""
    sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [make_rng(child) for child in sequence.spawn(count)]


def _off_diagonal_norm(a: ComplexArray) -> float:
    """Frobenius norm of the strict off-diagonal part, summed directly."""
    upper = a[np.triu_indices(a.shape[0], k=1)]
    return float(np.sqrt(2.0 * np.sum(np.abs(upper) ** 2)))


def _jacobi_rotation(a: ComplexArray, p: int, q: int) -> ComplexArray:
    """Unitary G that annihilates a[p, q] in G^H a G.

    The phase of a[p, q] is moved onto the q-th basis vector first, which leaves a
    real symmetric 2x2 block handled by the classic real rotation.
    """
    apq = a[p, q]
    magnitude = abs(apq)
    phase = apq / magnitude
    theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    g = np.eye(a.shape[0], dtype=np.complex128)
    g[p, p] = c
    g[p, q] = s
    g[q, p] = -s * np.conj(phase)
    g[q, q] = c * np.conj(phase)
    return g


def jacobi_eigh(m: ComplexArray) -> tuple[FloatArray, ComplexArray]:
    """Cyclic Jacobi diagonalization of a Hermitian array.

    Returns unsorted eigenvalues and the unitary whose columns are eigenvectors.
    """
    tol = get_tolerances()
    a = np.array(m, dtype=np.complex128)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = tol.jacobi_off_diagonal * max(1.0, float(np.linalg.norm(a)))

    for _ in range(tol.jacobi_max_sweeps):
        if _off_diagonal_norm(a) < threshold:
            return np.real(np.diag(a)).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                g = _jacobi_rotation(a, p, q)
                a = g.conj().T @ a @ g
                v = v @ g
        a = 0.5 * (a + a.conj().T)

    if _off_diagonal_norm(a) < threshold:
        return np.real(np.diag(a)).copy(), v
    raise ConvergenceError(f"Jacobi sweeps did not converge (off-diagonal norm {_off_diagonal_norm(a):.3e})")


def eig_hermitian(m: HermitianMatrix) -> tuple[FloatArray, ComplexMatrix]:
    """Eigenvalues (non-ascending) and orthonormal eigenvector columns of a Hermitian matrix."""
    eigenvalues, vectors = jacobi_eigh(m.entries)
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], ComplexMatrix(vectors[:, order])


def min_eigenvalue(m: HermitianMatrix) -> float:
    """Smallest eigenvalue through the Jacobi solver."""
    eigenvalues, _ = jacobi_eigh(m.entries)
    return float(np.min(eigenvalues))


def hermitian_sqrt(m: HermitianMatrix) -> ComplexArray:
    """Principal square root of a positive semidefinite matrix; tiny negative eigenvalues clip to zero."""
    eigenvalues, vectors = jacobi_eigh(m.entries)
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (vectors * roots) @ vectors.conj().T


def _validate_dim(dim: int) -> None:
    if dim not in UnitaryMatrix.ALLOWED_DIMS:
        raise ValidationError(f"Haar unitaries are drawn for dimensions {UnitaryMatrix.ALLOWED_DIMS}, got {dim}")


def haar_random_unitaries(dim: int, count: int, rng: np.random.Generator) -> ComplexArray:
    """Stack of ``count`` Haar-distributed SU(dim) matrices, shape (count, dim, dim).

    Complex Ginibre matrices are QR-factored, the columns of Q are rephased by the
    phases of R's diagonal, and the global phase is divided out to reach det 1.
    The k-th matrix only depends on the first k draws of the stream, so a batch of
    n starts with the batch of k < n for the same generator state.
    """
    _validate_dim(dim)
    gaussian = rng.standard_normal((count, dim, dim, 2))
    z = (gaussian[..., 0] + 1j * gaussian[..., 1]) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diagonal = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (diagonal / np.abs(diagonal))[:, np.newaxis, :]
    det = np.linalg.det(q)
    return q / (det ** (1.0 / dim))[:, np.newaxis, np.newaxis]


def haar_random_unitary(dim: int, rng: np.random.Generator) -> UnitaryMatrix:
    """Single Haar-distributed element of SU(dim)."""
    return UnitaryMatrix(haar_random_unitaries(dim, 1, rng)[0])


@lru_cache
def su_generators(dim: int) -> ComplexArray:
    """Generalized Gell-Mann basis of su(dim), orthonormal under Tr(A B), shape (dim^2 - 1, dim, dim)."""
    generators: list[ComplexArray] = []
    for j in range(dim):
        for k in range(j + 1, dim):
            sym = np.zeros((dim, dim), dtype=np.complex128)
            sym[j, k] = sym[k, j] = 1.0
            generators.append(sym / np.sqrt(2.0))
            anti = np.zeros((dim, dim), dtype=np.complex128)
            anti[j, k] = -1j
            anti[k, j] = 1j
            generators.append(anti / np.sqrt(2.0))
    for level in range(1, dim):
        diag = np.zeros(dim)
        diag[:level] = 1.0
        diag[level] = -level
        generators.append(np.diag(diag / np.sqrt(level * (level + 1))).astype(np.complex128))
    stack = np.array(generators)
    stack.flags.writeable = False
    return stack


def random_hermitian(dim: int, rng: np.random.Generator) -> ComplexArray:
    """GUE-like random Hermitian matrix, used by property checks."""
    gaussian = rng.standard_normal((dim, dim, 2))
    z = gaussian[..., 0] + 1j * gaussian[..., 1]
    return 0.5 * (z + z.conj().T)


def random_density_matrix(dim: int, rng: np.random.Generator) -> ComplexArray:
    """Full-rank random density matrix G G^H / Tr(G G^H) from a Ginibre matrix."""
    gaussian = rng.standard_normal((dim, dim, 2))
    g = gaussian[..., 0] + 1j * gaussian[..., 1]
    rho = g @ g.conj().T
    return rho / np.real(np.trace(rho))


def random_simplex(size: int, count: int, rng: np.random.Generator) -> FloatArray:
    """Uniform points on the probability simplex, each row sorted non-ascending."""
    points = rng.dirichlet(np.ones(size), size=count)
    return -np.sort(-points, axis=1)
