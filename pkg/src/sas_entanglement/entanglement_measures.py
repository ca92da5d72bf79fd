"""Negativity and two-qubit concurrence of states on 2 or 3 qubits.

Single-state eigenvalues come from the Jacobi solver of ``linalg``; the
``*_batch`` variants evaluate whole stacks of orbit points with LAPACK and are
what the stochastic searches call.

Spin flip: rho~ = (Y x Y) rho* (Y x Y), with the complex conjugate taken in the
computational product basis. The concurrence value does not depend on that
choice, intermediate matrices do.
"""

import numpy as np
from scipy.linalg import svdvals

from sas_entanglement.config import get_tolerances
from sas_entanglement.exceptions import ValidationError
from sas_entanglement.linalg import hermitian_sqrt, jacobi_eigh, min_eigenvalue
from sas_entanglement.models.domain import ComplexArray, FloatArray, HermitianMatrix, PTResult
from sas_entanglement.symmetric_space import partial_transpose, partial_transpose_array

PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SPIN_FLIP = np.kron(PAULI_Y, PAULI_Y)


def validate_density(full: HermitianMatrix, allowed_dims: tuple[int, ...]) -> None:
    """Unit trace and positive semidefinite within the configured tolerances."""
    tol = get_tolerances()
    if full.dim not in allowed_dims:
        raise ValidationError(f"Expected a density matrix of dimension {allowed_dims}, got {full.dim}")
    trace = full.trace()
    if abs(trace - 1.0) > tol.density_trace:
        raise ValidationError(f"Density matrix trace is {trace!r}, expected 1")
    eigenvalues, _ = jacobi_eigh(full.entries)
    if float(np.min(eigenvalues)) < -tol.psd:
        raise ValidationError(f"Density matrix is not positive semidefinite (min eigenvalue {np.min(eigenvalues):.3e})")


def negativity(full: HermitianMatrix) -> PTResult:
    """Minimal eigenvalue of the partial transpose on qubit 0 and N = 2 max(0, -lambda_min)."""
    validate_density(full, (4, 8))
    return PTResult.from_lambda_min(min_eigenvalue(partial_transpose(full, cut=0)))


def spin_flip(full: ComplexArray) -> ComplexArray:
    """(Y x Y) rho* (Y x Y) for one 4x4 array or a stack."""
    return SPIN_FLIP @ full.conj() @ SPIN_FLIP


def _signed_from_singular_values(mu: FloatArray) -> FloatArray:
    return mu[..., 0] - mu[..., 1] - mu[..., 2] - mu[..., 3]


def concurrence(full: HermitianMatrix) -> float:
    """Spin-flip concurrence of a two-qubit density matrix.

    The mu_i are the singular values of sqrt(rho) sqrt(rho~); their squares are the
    eigenvalues of sqrt(rho) rho~ sqrt(rho). Working with singular values keeps
    zero mu_i at rounding level for rank-deficient states.
    """
    validate_density(full, (4,))
    sqrt_rho = hermitian_sqrt(full)
    mu = svdvals(sqrt_rho @ spin_flip(sqrt_rho))
    return max(0.0, float(_signed_from_singular_values(mu)))


def lambda_min_batch(full: ComplexArray) -> FloatArray:
    """Minimal partial-transpose eigenvalue (qubit 0) for a stack of full-space operators."""
    return np.linalg.eigvalsh(partial_transpose_array(full, cut=0))[..., 0]


def signed_concurrence_batch(sqrt_full: ComplexArray) -> FloatArray:
    """mu_1 - mu_2 - mu_3 - mu_4 before clipping at zero, for a stack of square roots of 4x4 states."""
    mu = np.linalg.svd(sqrt_full @ spin_flip(sqrt_full), compute_uv=False)
    return _signed_from_singular_values(mu)
