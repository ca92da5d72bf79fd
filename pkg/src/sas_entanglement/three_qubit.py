"""Three-qubit symmetric states: necessary condition for SAS, its counterexample, radius bounds."""

from math import sqrt

import numpy as np
from codetiming import Timer
from scipy.optimize import minimize

from sas_entanglement.config import get_logger, get_settings, get_tolerances
from sas_entanglement.entanglement_measures import negativity
from sas_entanglement.exceptions import DomainError
from sas_entanglement.linalg import make_rng, random_simplex, spawn_rngs
from sas_entanglement.models.domain import FloatArray, Spectrum4Sym, SymmetricDensityMatrix, UnitaryMatrix
from sas_entanglement.symmetric_space import diagonal_state, embed_full
from sas_entanglement.two_qubit import r_sas_lower_bound
from sas_entanglement.workers.orbit_search import OrbitSearcher

logger = get_logger(__name__)

COUNTEREXAMPLE_SPECTRUM = (0.362191, 0.213809, 0.213, 0.211)

# Dicke slot (k = 0..3) that receives tau_1..tau_4 in the mixture state
MIXTURE_SLOTS = (2, 0, 1, 3)

R_MIN_POINT = ((3.0 + sqrt(3.0)) / 24.0, (3.0 + sqrt(3.0)) / 24.0)
R_MAX_POINT = (3.0 / 10.0, 1.0 / 10.0)
R_MIN_CLOSED_FORM = sqrt(9.0 - 5.0 * sqrt(3.0)) / (2.0 * sqrt(6.0))
R_MAX_CLOSED_FORM = sqrt(3.0) / 10.0


def dicke_mixture_state(s: Spectrum4Sym) -> SymmetricDensityMatrix:
    """Mixture t2 |D0><D0| + t3 |D1><D1| + t1 |D2><D2| + t4 |D3><D3|."""
    weights = [0.0] * 4
    for tau, slot in zip(s.tau, MIXTURE_SLOTS, strict=True):
        weights[slot] = tau
    return diagonal_state(3, (weights[0], weights[1], weights[2], weights[3]))


def obs1_polynomial(tau2: float, tau3: float, tau4: float) -> float:
    """Radicand of the minimal partial-transpose eigenvalue of the Dicke mixture."""
    return (
        8.0 - 16.0 * tau4 + 17.0 * tau4**2 - 16.0 * tau3
        + 4.0 * tau4 * tau3 + 12.0 * tau3**2 - 16.0 * tau2
        + 16.0 * tau4 * tau2 + 16.0 * tau3 * tau2 + 8.0 * tau2**2
    )


def lambda_min_obs1(s: Spectrum4Sym) -> float:
    """Minimal partial-transpose eigenvalue of ``dicke_mixture_state(s)``, (3 t4 + 2 t3 - sqrt(p)) / 6."""
    _, t2, t3, t4 = s.tau
    p = obs1_polynomial(t2, t3, t4)
    if p < 0:
        raise DomainError(f"Negative radicand p = {p!r} for spectrum {s.values}")
    return (3.0 * t4 + 2.0 * t3 - sqrt(p)) / 6.0


def obs1_margin(s: Spectrum4Sym) -> float:
    """tau_2 - (1 - tau_3 - tau_4 - sqrt(3 tau_3 tau_4)); negative values enter the non-SAS region."""
    _, t2, t3, t4 = s.tau
    return t2 - (1.0 - t3 - t4 - sqrt(3.0 * t3 * t4))


def not_sas_3qubit(s: Spectrum4Sym) -> bool:
    """Sufficient condition for a symmetric three-qubit state not to be SAS."""
    return obs1_margin(s) < 0 and s.tau[2] > 0


def counterexample_unitary() -> UnitaryMatrix:
    """The real orthogonal 4x4 rotation (det -1) rephased by exp(i pi/4) into SU(4)."""
    signs = np.array(
        [
            [1, 1, 1, 1],
            [1, -1, 1, -1],
            [1, -1, -1, 1],
            [1, 1, -1, -1],
        ],
        dtype=np.complex128,
    )
    return UnitaryMatrix(np.exp(1j * np.pi / 4) * signs / 2.0)


def counterexample_state() -> tuple[SymmetricDensityMatrix, float]:
    """State outside the Dicke-mixture region that still has a negative partial transpose."""
    rho_prime = dicke_mixture_state(Spectrum4Sym(COUNTEREXAMPLE_SPECTRUM))
    rotated = counterexample_unitary().conjugate(rho_prime.entries)
    rho_pp = SymmetricDensityMatrix.from_array(3, 0.5 * (rotated + rotated.conj().T))
    pt_min_eig = negativity(embed_full(rho_pp)).lambda_min
    return rho_pp, pt_min_eig


def _boundary_tau12(tau3: float, tau4: float) -> tuple[float, float]:
    root = sqrt(max(0.0, 3.0 * tau3 * tau4))
    return root, 1.0 - tau3 - tau4 - root


def _boundary_r_unchecked(tau3: float, tau4: float) -> float:
    root = sqrt(max(0.0, 3.0 * tau3 * tau4))
    r2 = (tau3 - 0.25) ** 2 + (tau4 - 0.25) ** 2 + (root - 0.25) ** 2 + (tau3 + tau4 + root - 0.75) ** 2
    return sqrt(r2)


def is_obs1_boundary_valid(tau3: float, tau4: float, slack: float | None = None) -> bool:
    """Whether the boundary spectrum through (tau_3, tau_4) is sorted and non-negative."""
    slack = get_tolerances().spectrum_sum if slack is None else slack
    if tau4 < -slack or tau3 < tau4 - slack:
        return False
    tau1, tau2 = _boundary_tau12(tau3, tau4)
    return tau1 >= tau2 - slack and tau2 >= tau3 - slack


def r_obs1_boundary(tau3: float, tau4: float) -> float:
    """Distance to rho_0 of the state on the Dicke-mixture boundary with the given tau_3, tau_4."""
    if not is_obs1_boundary_valid(tau3, tau4):
        tau1, tau2 = _boundary_tau12(tau3, tau4)
        raise DomainError(f"(tau_3, tau_4) = ({tau3}, {tau4}) gives unsorted boundary spectrum ({tau1}, {tau2}, {tau3}, {tau4})")
    return _boundary_r_unchecked(tau3, tau4)


def _refine_boundary(start: tuple[float, float], sign: float) -> tuple[float, tuple[float, float]] | None:
    constraints = [
        {"type": "ineq", "fun": lambda x: 2.0 * np.sqrt(max(0.0, 3.0 * x[0] * x[1])) - 1.0 + x[0] + x[1]},
        {"type": "ineq", "fun": lambda x: 1.0 - 2.0 * x[0] - x[1] - np.sqrt(max(0.0, 3.0 * x[0] * x[1]))},
        {"type": "ineq", "fun": lambda x: x[0] - x[1]},
    ]
    result = minimize(
        lambda x: sign * _boundary_r_unchecked(float(x[0]), float(x[1])) ** 2,
        x0=np.array(start),
        method="SLSQP",
        bounds=[(0.0, 1.0 / 3.0), (0.0, 1.0 / 3.0)],
        constraints=constraints,
        options={"ftol": 1e-16, "maxiter": 500},
    )
    tau3, tau4 = float(result.x[0]), float(result.x[1])
    if not is_obs1_boundary_valid(tau3, tau4, slack=1e-10):
        return None
    return _boundary_r_unchecked(tau3, tau4), (tau3, tau4)


@Timer(name="obs1_boundary_extrema", text="Dicke-mixture boundary extrema: {:.3f}s", logger=logger.debug)
def obs1_boundary_extrema(resolution: int = 400) -> tuple[float, tuple[float, float], float, tuple[float, float]]:
    """(min r, argmin, max r, argmax) of the boundary radius, by grid scan plus SLSQP refinement."""
    axis = np.linspace(0.0, 1.0 / 3.0, resolution)
    points = [(float(t3), float(t4)) for t3 in axis for t4 in axis if t4 <= t3 and is_obs1_boundary_valid(float(t3), float(t4))]
    if not points:
        raise DomainError("No valid boundary point on the scan grid")
    radii = np.array([_boundary_r_unchecked(*point) for point in points])

    extrema: list[tuple[float, tuple[float, float]]] = []
    for sign in (1.0, -1.0):
        best = int(np.argmin(sign * radii))
        candidates = [(float(radii[best]), points[best])]
        refined = _refine_boundary(points[best], sign)
        if refined is not None:
            candidates.append(refined)
        extrema.append(min(candidates, key=lambda c: sign * c[0]))

    (r_min, argmin), (r_max, argmax) = extrema
    logger.debug(f"Boundary radius range [{r_min:.12f}, {r_max:.12f}] over {len(points)} grid points")
    return r_min, argmin, r_max, argmax


def ball_radii_3qubit() -> tuple[float, float, float]:
    """(lower bound on r_SAS, upper bound on r_SAS, upper bound on R_SAS)."""
    return r_sas_lower_bound(1.5), R_MIN_CLOSED_FORM, R_MAX_CLOSED_FORM


def spectrum_radius(spectra: FloatArray) -> FloatArray:
    """Distance to rho_0 for rows of four-level spectra."""
    return np.sqrt(np.clip(np.sum(spectra**2, axis=-1) - 0.25, 0.0, None))


def _ray_point_separable(
    searcher: OrbitSearcher, direction: FloatArray, radius: float, n_orbit_samples: int, rng: np.random.Generator
) -> bool:
    settings = get_settings()
    point = np.clip(0.25 + radius * direction, 0.0, None)
    rho = dicke_mixture_state(Spectrum4Sym(tuple(point / point.sum())))
    return searcher.is_orbit_separable(
        rho, n_orbit_samples, rng, settings.tolerances.separable_negativity, settings.estimator.batch_size
    )


@Timer(name="estimate_R_sas_3qubit", text="R_SAS estimate: {:.2f}s", logger=logger.info)
def estimate_R_sas_3qubit(n_spectra: int, n_orbit_samples: int, seed: int) -> float:
    """Monte-Carlo estimate of the smallest ball around rho_0 containing every SAS state.

    Each random spectrum fixes a direction out of rho_0. Along that ray the SAS
    boundary is located by bisection, testing each point's Dicke-mixture
    arrangement plus Haar orbit points, and the estimate is the largest boundary
    radius over the sampled directions. Each direction owns a stream split off ``seed``.
    """
    if n_spectra < 1 or n_orbit_samples < 1:
        raise DomainError(f"Sample counts must be positive, got {n_spectra} spectra and {n_orbit_samples} orbit samples")

    settings = get_settings()
    resolution = settings.estimator.resolution
    searcher = OrbitSearcher(settings.orbit_search)

    master = np.random.SeedSequence(seed)
    spectrum_seed, orbit_seed = master.spawn(2)
    spectra = random_simplex(4, n_spectra, make_rng(spectrum_seed))
    offsets = spectra - 0.25
    norms = np.linalg.norm(offsets, axis=1)
    streams = spawn_rngs(orbit_seed, n_spectra)

    best, improved = 0.0, 0
    for index in range(n_spectra):
        if norms[index] <= resolution:
            continue
        direction = offsets[index] / norms[index]
        exit_radius = 0.25 / -direction[3]
        if exit_radius <= best + resolution:
            continue

        lo, hi = best + resolution, exit_radius
        if not _ray_point_separable(searcher, direction, lo, n_orbit_samples, streams[index]):
            continue
        if _ray_point_separable(searcher, direction, hi, n_orbit_samples, streams[index]):
            lo = hi
        while hi - lo > resolution:
            mid = 0.5 * (lo + hi)
            if _ray_point_separable(searcher, direction, mid, n_orbit_samples, streams[index]):
                lo = mid
            else:
                hi = mid
        best, improved = lo, improved + 1
        logger.debug("Raised SAS radius estimate", extra={"radius": best, "spectrum": spectra[index].tolist()})

    if improved == 0:
        logger.warning(f"No separable point beyond rho_0 found along {n_spectra} sampled directions")
    else:
        logger.info("Estimated SAS radius", extra={"radius": best, "improvements": improved, "directions": n_spectra})
    return float(best)
