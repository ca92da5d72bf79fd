"""Dicke basis, embedding of symmetric states into the full qubit space, partial transpose.

Product-basis convention: qubit 0 is the most significant bit of the index, so
for three qubits index 0b011 is |0>|1>|1>. The labels |+> and |-> of a Dicke
state are the computational states |0> and |1>.
"""

from functools import lru_cache
from itertools import combinations
from math import comb, sqrt

import numpy as np

from sas_entanglement.exceptions import ValidationError
from sas_entanglement.models.domain import (
    ComplexArray,
    DickeBasis,
    HermitianMatrix,
    SymmetricDensityMatrix,
)

SUPPORTED_QUBITS = (2, 3)


def _validate_qubits(n_qubits: int) -> None:
    if n_qubits not in SUPPORTED_QUBITS:
        raise ValidationError(f"Symmetric sector is implemented for {SUPPORTED_QUBITS} qubits, got {n_qubits}")


@lru_cache
def dicke_basis(n_qubits: int) -> DickeBasis:
    """Normalized Dicke vectors |D_N^(k)>, k = 0..N.

    Each vector is the sum of the distinct product strings with k qubits in |->,
    divided by sqrt(binomial(N, k)).
    """
    _validate_qubits(n_qubits)
    dim = 2**n_qubits
    vectors = np.zeros((n_qubits + 1, dim))
    for k in range(n_qubits + 1):
        for flipped in combinations(range(n_qubits), k):
            index = sum(1 << (n_qubits - 1 - qubit) for qubit in flipped)
            vectors[k, index] = 1.0
        vectors[k] /= sqrt(comb(n_qubits, k))
    vectors.flags.writeable = False
    return DickeBasis(n_qubits=n_qubits, vectors=vectors)


def swap_qubits(vector_or_matrix: ComplexArray, n_qubits: int, first: int, second: int) -> ComplexArray:
    """Exchange two tensor factors of a state vector (1-d) or operator (2-d)."""
    perm = list(range(n_qubits))
    perm[first], perm[second] = perm[second], perm[first]
    shape = [2] * n_qubits
    if vector_or_matrix.ndim == 1:
        return vector_or_matrix.reshape(shape).transpose(perm).reshape(-1)
    tensor = vector_or_matrix.reshape(shape + shape)
    full_perm = perm + [n_qubits + axis for axis in perm]
    return tensor.transpose(full_perm).reshape(2**n_qubits, 2**n_qubits)


def embed_array(entries: ComplexArray, n_qubits: int) -> ComplexArray:
    """B rho B^H for one (d, d) array or a stack (..., d, d), B the Dicke isometry."""
    b = dicke_basis(n_qubits).isometry
    return b @ entries @ b.conj().T


def embed_full(rho: SymmetricDensityMatrix) -> HermitianMatrix:
    """Write a symmetric state as a 2^N x 2^N operator supported on the symmetric sector."""
    return HermitianMatrix(embed_array(rho.entries, rho.n_qubits))


def partial_transpose_array(full: ComplexArray, cut: int = 0) -> ComplexArray:
    """Transpose qubit ``cut`` of one operator or a stack of operators on 2 or 3 qubits."""
    dim = full.shape[-1]
    if dim not in (4, 8):
        raise ValidationError(f"Partial transpose is defined here for 2 or 3 qubits (dim 4 or 8), got {dim}")
    n_qubits = dim.bit_length() - 1
    if not 0 <= cut < n_qubits:
        raise ValidationError(f"Cut qubit {cut} out of range for {n_qubits} qubits")

    batch = full.shape[:-2]
    before = 2**cut
    after = dim // (2 * before)
    tensor = full.reshape((*batch, before, 2, after, before, 2, after))
    offset = len(batch)
    axes = list(range(offset + 6))
    axes[offset + 1], axes[offset + 4] = axes[offset + 4], axes[offset + 1]
    return tensor.transpose(axes).reshape(full.shape)


def partial_transpose(full: HermitianMatrix, cut: int = 0) -> HermitianMatrix:
    """Block transpose over tensor factor ``cut`` (a 2x2 or 2x4 bipartition)."""
    return HermitianMatrix(partial_transpose_array(full.entries, cut))


def diagonal_state(n_qubits: int, weights: tuple[float, ...]) -> SymmetricDensityMatrix:
    """Mixture of Dicke projectors, weights listed for k = 0..N."""
    _validate_qubits(n_qubits)
    if len(weights) != n_qubits + 1:
        raise ValidationError(f"Need {n_qubits + 1} Dicke weights, got {len(weights)}")
    return SymmetricDensityMatrix.from_array(n_qubits, np.diag(np.asarray(weights, dtype=np.complex128)))


def maximally_mixed(n_qubits: int) -> SymmetricDensityMatrix:
    """rho_0 = identity / (N + 1) on the symmetric sector."""
    _validate_qubits(n_qubits)
    return diagonal_state(n_qubits, (1.0 / (n_qubits + 1),) * (n_qubits + 1))
