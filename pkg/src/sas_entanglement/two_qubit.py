"""Closed forms for two-qubit states: SU(4) and symmetric SU(3) maximal negativity, SAS criterion, radii."""

from collections.abc import Sequence
from itertools import permutations
from math import comb, isclose, sqrt

import numpy as np
from scipy.optimize import minimize_scalar

from sas_entanglement.config import get_tolerances
from sas_entanglement.exceptions import DomainError, ValidationError
from sas_entanglement.linalg import eig_hermitian
from sas_entanglement.models.domain import (
    CriticalPoint,
    Spectrum3,
    Spectrum4,
    SymmetricDensityMatrix,
    UnitaryMatrix,
)
from sas_entanglement.symmetric_space import diagonal_state

SAS_BOUNDARY_DOMAIN = (1.0 / 9.0, 1.0 / 3.0)

EPS = float(np.finfo(np.float64).eps)
DISCRIMINANT_ULPS = 16.0

# Dicke slot (k = 0, 1, 2) that receives tau_1, tau_2, tau_3 in the optimal state
OPTIMAL_SLOTS = (1, 2, 0)


def max_negativity_su4(s: Spectrum4) -> float:
    """Largest negativity over the global SU(4) orbit of a two-qubit state."""
    l1, l2, l3, l4 = s.lam
    return max(0.0, sqrt((l1 - l3) ** 2 + (l2 - l4) ** 2) - l2 - l4)


def is_as_su4(s: Spectrum4) -> bool:
    """Absolute separability under SU(4): (l1 - l3)^2 - 4 l2 l4 <= 0."""
    l1, l2, l3, l4 = s.lam
    return (l1 - l3) ** 2 - 4.0 * l2 * l4 <= get_tolerances().sas_boundary_slack


def johnston_as(spectrum: Sequence[float], m: int) -> bool:
    """Absolute separability of a qubit-qudit (2 x m) state from its sorted spectrum.

    The test is l_1 <= l_{2m-1} + 2 sqrt(l_{2m-2} l_{2m}) with 1-based indices.
    """
    tol = get_tolerances()
    values = np.asarray(spectrum, dtype=np.float64)
    if m < 2:
        raise ValidationError(f"Johnston criterion needs m >= 2, got {m}")
    if values.size != 2 * m:
        raise ValidationError(f"Spectrum length {values.size} does not match 2m = {2 * m}")
    if abs(float(values.sum()) - 1.0) > tol.normalization_correction:
        raise ValidationError(f"Spectrum sums to {values.sum()!r}, expected 1")
    if np.any(np.diff(values) > tol.normalization_correction):
        raise ValidationError("Spectrum must be sorted non-ascending")
    if np.min(values) < -tol.negative_entry:
        raise ValidationError(f"Spectrum has negative entries: {values.tolist()}")

    clipped = np.clip(values, 0.0, None)
    bound = clipped[2 * m - 2] + 2.0 * sqrt(clipped[2 * m - 3] * clipped[2 * m - 1])
    return bool(clipped[0] <= bound + tol.sas_boundary_slack)


def max_negativity_su3(s: Spectrum3) -> float:
    """Maximal negativity over the SU(3) orbit of a symmetric two-qubit state.

    N = max(0, sqrt(t1^2 + (t2 - t3)^2) - t2 - t3).
    """
    t1, t2, t3 = s.tau
    return max(0.0, sqrt(t1 * t1 + (t2 - t3) ** 2) - t2 - t3)


def optimal_state(s: Spectrum3) -> SymmetricDensityMatrix:
    """State of the orbit reaching the maximal negativity: t3 on |D0>, t1 on |D1>, t2 on |D2>."""
    weights = [0.0, 0.0, 0.0]
    for tau, slot in zip(s.tau, OPTIMAL_SLOTS, strict=True):
        weights[slot] = tau
    return diagonal_state(2, (weights[0], weights[1], weights[2]))


def optimal_unitary_su3(rho: SymmetricDensityMatrix) -> UnitaryMatrix:
    """U in SU(3) with U rho U^H equal to ``optimal_state`` of rho's spectrum."""
    if rho.n_qubits != 2:
        raise ValidationError(f"Optimal SU(3) unitary is defined for two-qubit states, got {rho.n_qubits} qubits")
    _, vectors = eig_hermitian(rho.matrix)
    permutation = np.zeros((3, 3), dtype=np.complex128)
    for source, slot in enumerate(OPTIMAL_SLOTS):
        permutation[slot, source] = 1.0
    u = permutation @ vectors.entries.conj().T
    return UnitaryMatrix(u / np.linalg.det(u) ** (1.0 / 3.0))


def max_concurrence_su3(s: Spectrum3) -> float:
    """Concurrence of the optimal state, max(0, t1 - 2 sqrt(t2 t3))."""
    t1, t2, t3 = s.tau
    return max(0.0, t1 - 2.0 * sqrt(t2 * t3))


def is_sas(s: Spectrum3) -> bool:
    """Symmetric absolute separability: sqrt(t2) + sqrt(t3) >= 1.

    The boundary counts as SAS; a slack of ``sas_boundary_slack`` is granted on it.
    """
    _, t2, t3 = s.tau
    return sqrt(t2) + sqrt(t3) >= 1.0 - get_tolerances().sas_boundary_slack


def _case_a_points(perm: tuple[int, int, int], t: tuple[float, float, float]) -> list[CriticalPoint]:
    t1, t2, t3 = t
    root = sqrt(t1 * t1 + (t2 - t3) ** 2)
    points: list[CriticalPoint] = []
    if t2 >= t3:
        points.append(CriticalPoint("A-i", perm, t, 0.5 * (t2 + t3 - root), {"z": -t1 / root if root > 0 else None}))
    if t2 <= t3:
        points.append(CriticalPoint("A-ii", perm, t, 0.5 * (t2 + t3 + root), {"z": t1 / root if root > 0 else None}))
    points.append(CriticalPoint("A-iii", perm, t, 0.5 * (t2 + t3 - t1)))
    points.append(CriticalPoint("A-iv", perm, t, 0.5))
    return points


def _case_b_points(perm: tuple[int, int, int], t: tuple[float, float, float]) -> list[CriticalPoint]:
    t1, t2, t3 = t
    radicand = 1.0 - 8.0 * t1 * t2
    if radicand < 0:
        return []
    root = sqrt(radicand)
    points: list[CriticalPoint] = []
    if t1 >= t2:
        parameters = {"y1": (t1 + t2 - t3) / root, "y2": -t3 / root} if root > 0 else {"y1": None, "y2": None}
        points.append(CriticalPoint("B-i", perm, t, 0.25 * (1.0 - root), parameters))
    if t1 <= t2:
        parameters = {"y1": (t3 - t1 - t2) / root, "y2": t3 / root} if root > 0 else {"y1": None, "y2": None}
        points.append(CriticalPoint("B-ii", perm, t, 0.25 * (1.0 + root), parameters))
    return points


def critical_point_values(s: Spectrum3) -> list[CriticalPoint]:
    """Every critical point of the reduced objective, for all six eigenvalue orderings.

    Case A fixes the phase so that X has eigenvalues (1 +- sqrt(1 - z^2))/2 and z/2;
    case B drops the third generator. Case B points need 1 - 8 t1 t2 >= 0.
    """
    points: list[CriticalPoint] = []
    for perm in permutations(range(3)):
        p = (perm[0], perm[1], perm[2])
        t = (s.tau[p[0]], s.tau[p[1]], s.tau[p[2]])
        points.extend(_case_a_points(p, t))
        points.extend(_case_b_points(p, t))
    return points


def radius(rho: SymmetricDensityMatrix) -> float:
    """Hilbert-Schmidt distance to the maximally mixed symmetric state, sqrt(Tr rho^2 - 1/(2s+1))."""
    excess = rho.matrix.purity() - 1.0 / (2.0 * rho.spin + 1.0)
    return sqrt(max(0.0, excess))


def r_of_spectrum(s: Spectrum3) -> float:
    """Radius of a two-qubit symmetric state from its spectrum."""
    _, t2, t3 = s.tau
    r2 = 2.0 / 3.0 + 2.0 * (t2 * t2 + t3 * t3 + t2 * t3 - t2 - t3)
    return sqrt(max(0.0, r2))


def tau2_from_radius(tau3: float, r: float) -> float:
    """Middle eigenvalue of the sorted spectrum with the given smallest eigenvalue and radius.

    Solves the radius relation for tau_2 and keeps the root with tau_1 >= tau_2.
    The discriminant 2 r^2 - 3 (tau_3 - 1/3)^2 is evaluated as 2 (r - a)(r + a); values
    within a few ulps of zero are the tau_1 = tau_2 edge and snap to it.
    """
    a = sqrt(1.5) * abs(tau3 - 1.0 / 3.0)
    discriminant = 2.0 * (r - a) * (r + a)
    if abs(discriminant) <= DISCRIMINANT_ULPS * EPS * (r + a) ** 2:
        discriminant = 0.0
    if discriminant < -1e-12:
        raise DomainError(f"No spectrum with tau_3 = {tau3} has radius {r}")
    return 0.5 * ((1.0 - tau3) - sqrt(max(0.0, discriminant)))


def sas_boundary_r(tau3: float) -> float:
    """Radius of the SAS boundary at a given tau_3, sqrt(2/3) (1 + 3 (tau_3 - sqrt(tau_3)))."""
    low, high = SAS_BOUNDARY_DOMAIN
    slack = get_tolerances().sas_boundary_slack
    if not low - slack <= tau3 <= high + slack:
        raise DomainError(f"tau_3 = {tau3} outside [1/9, 1/3]")
    tau3 = min(max(tau3, low), high)
    return sqrt(2.0 / 3.0) * (1.0 + 3.0 * (tau3 - sqrt(tau3)))


def sas_boundary_extrema(n_grid: int = 2001) -> tuple[float, float, float, float]:
    """(min r, argmin tau_3, max r, argmax tau_3) of ``sas_boundary_r`` by grid scan and Brent refinement."""
    low, high = SAS_BOUNDARY_DOMAIN
    grid = np.linspace(low, high, n_grid)
    values = np.array([sas_boundary_r(float(x)) for x in grid])

    def refine(sign: float) -> tuple[float, float]:
        best = int(np.argmin(sign * values))
        lo, hi = grid[max(best - 1, 0)], grid[min(best + 1, n_grid - 1)]
        result = minimize_scalar(lambda x: sign * sas_boundary_r(float(x)), bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
        candidates = [(float(sign * values[best]), float(grid[best])), (float(result.fun), float(result.x))]
        value, argument = min(candidates)
        return sign * value, argument

    r_min, tau_min = refine(1.0)
    r_max, tau_max = refine(-1.0)
    return r_min, tau_min, r_max, tau_max


def r_sas_lower_bound(spin: float) -> float:
    """Spin-s lower bound on the radius of the largest ball of SAS states around rho_0."""
    if not isclose(2 * spin, round(2 * spin)) or spin <= 0:
        raise DomainError(f"Spin must be a positive half-integer, got {spin}")
    four_s = round(4 * spin)
    two_s = round(2 * spin)
    return 1.0 / sqrt((4 * spin + 2) * ((4 * spin + 1) * comb(four_s, two_s) - (spin + 1)))


def ball_radii_2qubit() -> tuple[float, float, float]:
    """(r_SAS, R_SAS, spin-1 lower bound): 1/(2 sqrt 6), 2/(3 sqrt 6), 1/(2 sqrt 42)."""
    return 1.0 / (2.0 * sqrt(6.0)), 2.0 / (3.0 * sqrt(6.0)), r_sas_lower_bound(1.0)
