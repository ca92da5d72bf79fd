"""Verification service - runs the numerical property suites behind ``sas-orbits verify``.

Each suite draws from its own stream, ``SeedSequence([seed, suite index])``, so a
suite gives the same checks whether it runs alone or as part of ``all``.
"""

import time
from collections.abc import Callable
from math import sqrt

import numpy as np
from codetiming import Timer

from sas_entanglement.config import OrbitSearchConfig, SuiteScale, get_logger, get_settings
from sas_entanglement.entanglement_measures import concurrence, negativity
from sas_entanglement.exceptions import VerificationError
from sas_entanglement.linalg import (
    eig_hermitian,
    haar_random_unitaries,
    make_rng,
    random_density_matrix,
    random_hermitian,
    random_simplex,
)
from sas_entanglement.models.api import CheckResult, VerificationReport
from sas_entanglement.models.domain import HermitianMatrix, Spectrum3, Spectrum4, Spectrum4Sym, SymmetricDensityMatrix
from sas_entanglement.symmetric_space import dicke_basis, embed_full, partial_transpose_array, swap_qubits
from sas_entanglement.three_qubit import (
    COUNTEREXAMPLE_SPECTRUM,
    R_MAX_CLOSED_FORM,
    R_MAX_POINT,
    R_MIN_CLOSED_FORM,
    R_MIN_POINT,
    counterexample_state,
    dicke_mixture_state,
    estimate_R_sas_3qubit,
    lambda_min_obs1,
    not_sas_3qubit,
    obs1_boundary_extrema,
    obs1_margin,
    obs1_polynomial,
    r_obs1_boundary,
)
from sas_entanglement.two_qubit import (
    critical_point_values,
    is_as_su4,
    is_sas,
    johnston_as,
    max_concurrence_su3,
    max_negativity_su3,
    max_negativity_su4,
    optimal_state,
    r_sas_lower_bound,
    sas_boundary_extrema,
)
from sas_entanglement.workers.orbit_search import orbit_maximize, orbit_objective

logger = get_logger(__name__)

Suite = Callable[["VerificationService", np.random.Generator], list[CheckResult]]

ORACLE_TOLERANCE = 1e-5
CONCURRENCE_ORACLE_TOLERANCE = 1e-4
OVERSHOOT_TOLERANCE = 1e-9
BOUNDARY_PERTURBATION = 1e-8
ESTIMATE_BRACKET = (0.168, 0.17321)


def _check(name: str, deviations: list[float] | np.ndarray, tolerance: float, **details: object) -> CheckResult:
    """Pass when every deviation is at most ``tolerance``."""
    values = np.asarray(deviations, dtype=np.float64)
    worst = float(np.max(values)) if values.size else 0.0
    return CheckResult(
        name=name,
        passed=bool(values.size == 0 or worst <= tolerance),
        samples=int(values.size),
        max_deviation=worst,
        tolerance=tolerance,
        details=dict(details),
    )


def _flag(name: str, passed: bool, samples: int = 1, **details: object) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), samples=samples, details=dict(details))


class VerificationService:
    """Run property suites at a given scale and seed."""

    def __init__(self, scale: str = "quick", seed: int = 0):
        settings = get_settings()
        if scale not in ("quick", "full"):
            raise VerificationError(f"Unknown scale {scale!r}; expected 'quick' or 'full'")
        self.scale_name = scale
        self.scale: SuiteScale = getattr(settings.verification, scale)
        self.seed = seed
        self.settings = settings

    def run(self, suite: str) -> VerificationReport:
        """Run one suite (or ``all``) and collect its checks."""
        if suite != "all" and suite not in SUITES:
            raise VerificationError(f"Unknown suite {suite!r}; expected one of {[*SUITES, 'all']}")
        names = list(SUITES) if suite == "all" else [suite]
        start = time.perf_counter()

        checks: list[CheckResult] = []
        for name in names:
            index = list(SUITES).index(name)
            rng = make_rng(np.random.SeedSequence([self.seed, index]))
            with Timer(name=f"suite_{name}", text=f"Suite {name}: {{:.2f}}s", logger=logger.info):
                suite_checks = SUITES[name](self, rng)
            for check in suite_checks:
                check.name = f"{name}.{check.name}"
                if not check.passed:
                    logger.warning("Check failed", extra={"check": check.name, "max_deviation": check.max_deviation})
            checks.extend(suite_checks)

        report = VerificationReport(
            suite=suite,
            scale="quick" if self.scale_name == "quick" else "full",
            seed=self.seed,
            passed=all(check.passed for check in checks),
            checks=checks,
            elapsed_seconds=time.perf_counter() - start,
        )
        logger.info("Verification finished", extra={"suite": suite, "passed": report.passed, "checks": len(checks)})
        return report

    def _oracle_config(self, rng: np.random.Generator) -> OrbitSearchConfig:
        return self.settings.orbit_search.model_copy(
            update={
                "n_haar_samples": self.scale.n_haar_samples,
                "n_ascent_restarts": self.scale.n_ascent_restarts,
                "seed": int(rng.integers(2**63)),
            }
        )

    # Suites

    def theorem1(self, rng: np.random.Generator) -> list[CheckResult]:
        """Closed-form maximal negativity against its optimal state and the orbit oracle."""
        boundary = [
            abs(max_negativity_su3(Spectrum3((0.5, 0.25, 0.25)))),
            abs(max_negativity_su3(Spectrum3((4.0 / 9.0, 4.0 / 9.0, 1.0 / 9.0)))),
            abs(max_negativity_su3(Spectrum3((1.0, 0.0, 0.0))) - 1.0),
        ]

        attained = []
        for tau in random_simplex(3, self.scale.n_spectra, rng):
            s = Spectrum3(tuple(tau))
            attained.append(abs(negativity(embed_full(optimal_state(s))).negativity - max_negativity_su3(s)))

        reach, overshoot, consistency = [], [], []
        for tau in random_simplex(3, self.scale.n_oracle_spectra, rng):
            s = Spectrum3(tuple(tau))
            rho = SymmetricDensityMatrix.from_array(2, _random_orbit_point(s.as_array(), rng))
            closed = max_negativity_su3(s)
            result = orbit_maximize(rho, "negativity", self._oracle_config(rng), stop_at=closed - ORACLE_TOLERANCE / 10)
            reach.append(abs(result.best_value - closed))
            overshoot.append(result.best_value - closed)
            consistency.append(abs(orbit_objective(rho, result.best_unitary, "negativity") - result.best_value))

        return [
            _check("boundary_values", boundary, 1e-15),
            _check("optimal_state_attains_closed_form", attained, 1e-10),
            _check("oracle_reaches_closed_form", reach, ORACLE_TOLERANCE),
            _check("oracle_never_exceeds_closed_form", overshoot, OVERSHOOT_TOLERANCE),
            _check("result_matches_unitary", consistency, 1e-12),
        ]

    def concurrence(self, rng: np.random.Generator) -> list[CheckResult]:
        """Concurrence formula of the optimal state, its oracle, and PPT <=> zero concurrence."""
        formula = []
        for tau in random_simplex(3, self.scale.n_spectra, rng):
            s = Spectrum3(tuple(tau))
            formula.append(abs(concurrence(embed_full(optimal_state(s))) - max_concurrence_su3(s)))

        reach, overshoot = [], []
        for tau in random_simplex(3, self.scale.n_oracle_spectra, rng):
            s = Spectrum3(tuple(tau))
            rho = SymmetricDensityMatrix.from_array(2, _random_orbit_point(s.as_array(), rng))
            closed = max_concurrence_su3(s)
            result = orbit_maximize(
                rho, "concurrence", self._oracle_config(rng), stop_at=closed - CONCURRENCE_ORACLE_TOLERANCE / 10
            )
            reach.append(abs(result.best_value - closed))
            overshoot.append(result.best_value - closed)

        threshold = self.settings.tolerances.separable_negativity
        mismatches = 0
        for _ in range(self.scale.n_spectra):
            full = HermitianMatrix(random_density_matrix(4, rng) if rng.random() < 0.5 else _rank_two_state(rng))
            if (negativity(full).negativity <= threshold) != (concurrence(full) <= threshold):
                mismatches += 1

        return [
            _check("optimal_state_concurrence", formula, 1e-10),
            _check("oracle_reaches_closed_form", reach, CONCURRENCE_ORACLE_TOLERANCE),
            _check("oracle_never_exceeds_closed_form", overshoot, OVERSHOOT_TOLERANCE),
            _flag("ppt_iff_zero_concurrence", mismatches == 0, self.scale.n_spectra, mismatches=mismatches),
        ]

    def appendixA(self, rng: np.random.Generator) -> list[CheckResult]:
        """Minimum over the critical points equals the closed-form minimal eigenvalue."""
        deviations = []
        for tau in random_simplex(3, 5 * self.scale.n_spectra, rng):
            s = Spectrum3(tuple(tau))
            t1, t2, t3 = s.tau
            expected = 0.5 * (t2 + t3 - sqrt(t1 * t1 + (t2 - t3) ** 2))
            lowest = min(point.lambda_value for point in critical_point_values(s))
            deviations.append(abs(lowest - expected))
        return [_check("critical_point_minimum", deviations, 1e-10)]

    def obs1(self, rng: np.random.Generator) -> list[CheckResult]:
        """Three-qubit closed form, soundness of the condition, counterexample, no AS for N = 3."""
        closed, branch, min_radicand, unsound, johnston_passes = [], [], np.inf, 0, 0
        n_flagged = 0
        for tau in random_simplex(4, self.scale.n_spectra * 5, rng):
            s = Spectrum4Sym(tuple(tau))
            _, t2, t3, t4 = s.tau
            radicand = obs1_polynomial(t2, t3, t4)
            min_radicand = min(min_radicand, radicand)
            if radicand < 0:
                continue
            lam = lambda_min_obs1(s)
            full = embed_full(dicke_mixture_state(s))
            closed.append(abs(min(lam, 0.0) - negativity(full).lambda_min))
            branch.append(float(np.min(np.abs(np.linalg.eigvalsh(partial_transpose_array(full.entries, 0)) - lam))))
            if not_sas_3qubit(s):
                n_flagged += 1
                if lam >= 0:
                    unsound += 1
            if johnston_as([*s.values, 0.0, 0.0, 0.0, 0.0], 4):
                johnston_passes += 1

        rho_pp, pt_min = counterexample_state()
        s_ce = Spectrum4Sym(COUNTEREXAMPLE_SPECTRUM)
        spectrum_error = float(np.max(np.abs(rho_pp.eigenvalues() - s_ce.as_array())))
        margin = obs1_margin(s_ce)

        return [
            _check("closed_form_matches_partial_transpose", closed, 1e-10),
            _check("closed_form_is_partial_transpose_eigenvalue", branch, 1e-10),
            _flag("radicand_nonnegative", min_radicand >= 0, len(closed), min_radicand=float(min_radicand)),
            _flag("condition_implies_entangled", unsound == 0, n_flagged, violations=unsound),
            _flag(
                "counterexample",
                pt_min < 0 and not not_sas_3qubit(s_ce) and abs(margin - 0.005) <= 1e-4 and spectrum_error <= 1e-12,
                pt_min_eigenvalue=pt_min,
                margin=margin,
                spectrum_error=spectrum_error,
            ),
            _flag("no_absolute_separability", johnston_passes == 0, len(closed), passes=johnston_passes),
        ]

    def radii(self, rng: np.random.Generator) -> list[CheckResult]:
        """Ball radii: boundary extrema, lower bounds, three-qubit stationary points, Monte-Carlo estimate."""
        r_min, _, r_max, _ = sas_boundary_extrema()
        b_min, _, b_max, _ = obs1_boundary_extrema()
        checks = [
            _check("two_qubit_boundary_min", [abs(r_min - 1.0 / (2.0 * sqrt(6.0)))], 1e-9),
            _check("two_qubit_boundary_max", [abs(r_max - 2.0 / (3.0 * sqrt(6.0)))], 1e-9),
            _check("lower_bound_spin_1", [abs(r_sas_lower_bound(1.0) - 1.0 / (2.0 * sqrt(42.0)))], 1e-12),
            _check("lower_bound_spin_3_2", [abs(r_sas_lower_bound(1.5) - 1.0 / (10.0 * sqrt(11.0)))], 1e-12),
            _check("three_qubit_point_min", [abs(r_obs1_boundary(*R_MIN_POINT) - R_MIN_CLOSED_FORM)], 1e-9),
            _check("three_qubit_point_max", [abs(r_obs1_boundary(*R_MAX_POINT) - R_MAX_CLOSED_FORM)], 1e-9),
            _check("three_qubit_scan_min", [abs(b_min - R_MIN_CLOSED_FORM)], 1e-9),
            _check("three_qubit_scan_max", [abs(b_max - R_MAX_CLOSED_FORM)], 1e-9),
        ]

        seed = int(rng.integers(2**63))
        estimate = estimate_R_sas_3qubit(self.scale.n_estimator_spectra, self.scale.n_estimator_orbit_samples, seed)
        checks.append(_check("estimate_below_bound", [estimate - R_MAX_CLOSED_FORM], OVERSHOOT_TOLERANCE, estimate=estimate))
        if self.scale_name == "full":
            low, high = ESTIMATE_BRACKET
            checks.append(_flag("estimate_bracket", low <= estimate <= high, estimate=estimate, bracket=[low, high]))
        return checks

    def johnston(self, rng: np.random.Generator) -> list[CheckResult]:
        """Qubit-qudit criterion against the SU(4) condition, and SU(4) >= SU(3) ordering."""
        disagreements, ordering = 0, []
        for lam in random_simplex(4, self.scale.n_spectra, rng):
            s = Spectrum4(tuple(lam))
            if johnston_as(s.values, 2) != is_as_su4(s):
                disagreements += 1
            if is_as_su4(s) != (max_negativity_su4(s) == 0.0):
                disagreements += 1
        for tau in random_simplex(3, self.scale.n_spectra, rng):
            s = Spectrum3(tuple(tau))
            padded = Spectrum4((*s.values, 0.0))
            ordering.append(max_negativity_su3(s) - max_negativity_su4(padded))
        return [
            _flag("criterion_matches_su4_condition", disagreements == 0, 2 * self.scale.n_spectra, disagreements=disagreements),
            _check("su4_dominates_su3", ordering, 1e-12),
        ]

    def sas_consistency(self, rng: np.random.Generator) -> list[CheckResult]:
        """is_sas agrees with a vanishing closed-form maximum, also just across the boundary."""
        threshold = self.settings.tolerances.separable_negativity
        mismatches = 0
        for tau in random_simplex(3, self.scale.n_estimator_spectra, rng):
            s = Spectrum3(tuple(tau))
            value = max_negativity_su3(s)
            if is_sas(s) != (value <= threshold):
                mismatches += 1

        side_errors = 0
        tau3_values = rng.uniform(0.12, 0.24, self.scale.n_spectra)
        for tau3 in tau3_values:
            tau2 = (1.0 - sqrt(tau3)) ** 2
            for delta, expect_sas in ((BOUNDARY_PERTURBATION, True), (-BOUNDARY_PERTURBATION, False)):
                s = Spectrum3((1.0 - tau2 - delta - tau3, tau2 + delta, tau3))
                value = max_negativity_su3(s)
                if is_sas(s) != expect_sas or (value == 0.0) != expect_sas:
                    side_errors += 1

        return [
            _flag("sas_iff_zero_negativity", mismatches == 0, self.scale.n_estimator_spectra, mismatches=mismatches),
            _flag("boundary_perturbation", side_errors == 0, 2 * len(tau3_values), errors=side_errors),
        ]

    def linalg(self, rng: np.random.Generator) -> list[CheckResult]:
        """Eigensolver, Haar sampler and symmetric-sector plumbing."""
        tol = self.settings.tolerances
        reconstruction, orthonormality, trace, recovered = [], [], [], []
        for _ in range(self.scale.n_spectra):
            dim = int(rng.integers(3, 9))
            m = HermitianMatrix(random_hermitian(dim, rng))
            values, vectors = eig_hermitian(m)
            v = vectors.entries
            reconstruction.append(float(np.max(np.abs(v @ np.diag(values) @ v.conj().T - m.entries))))
            orthonormality.append(float(np.max(np.abs(v.conj().T @ v - np.eye(dim)))))
            trace.append(abs(float(np.sum(values)) - m.trace()))

            spectrum = np.sort(rng.uniform(-1.0, 1.0, 4))[::-1]
            u = haar_random_unitaries(4, 1, rng)[0]
            target = HermitianMatrix(_symmetrize(u @ np.diag(spectrum) @ u.conj().T))
            recovered.append(float(np.max(np.abs(eig_hermitian(target)[0] - spectrum))))

        unitarity, determinant = [], []
        for dim in (3, 4):
            batch = haar_random_unitaries(dim, 500, rng)
            gram = batch @ np.swapaxes(batch.conj(), -1, -2)
            unitarity.extend(np.max(np.abs(gram - np.eye(dim)), axis=(1, 2)).tolist())
            determinant.extend(np.abs(np.linalg.det(batch) - 1.0).tolist())
        moment = float(np.mean(np.abs(haar_random_unitaries(3, 10_000, rng)[:, 0, 0]) ** 2))

        dicke_errors = []
        for n_qubits in (2, 3):
            vectors = dicke_basis(n_qubits).vectors
            dicke_errors.append(float(np.max(np.abs(vectors @ vectors.T - np.eye(n_qubits + 1)))))
            for first in range(n_qubits):
                for second in range(first + 1, n_qubits):
                    for vector in vectors:
                        dicke_errors.append(float(np.max(np.abs(swap_qubits(vector, n_qubits, first, second) - vector))))

        cut_spread, purity = [], []
        for _ in range(self.scale.n_spectra):
            rho = SymmetricDensityMatrix.from_array(3, _symmetrize(random_density_matrix(4, rng)))
            full = embed_full(rho).entries
            spectra = [np.linalg.eigvalsh(partial_transpose_array(full, cut)) for cut in range(3)]
            cut_spread.append(max(float(np.max(np.abs(spectra[0] - other))) for other in spectra[1:]))
            purity.append(abs(rho.matrix.purity() - float(np.real(np.vdot(full, full)))))

        return [
            _check("eig_reconstruction", reconstruction, tol.reconstruction),
            _check("eig_orthonormality", orthonormality, tol.reconstruction),
            _check("eig_trace", trace, 1e-10),
            _check("eig_recovers_spectrum", recovered, 1e-10),
            _check("haar_unitarity", unitarity, tol.unitary),
            _check("haar_determinant", determinant, tol.unitary),
            _check("haar_moment", [abs(moment - 1.0 / 3.0)], 0.02, mean=moment),
            _check("dicke_basis", dicke_errors, 1e-12),
            _check("partial_transpose_cut_independence", cut_spread, 1e-10),
            _check("embedding_preserves_purity", purity, 1e-12),
        ]


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _random_orbit_point(spectrum: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """U diag(spectrum) U^H for a Haar U in SU(3)."""
    u = haar_random_unitaries(3, 1, rng)[0]
    return _symmetrize(u @ np.diag(spectrum) @ u.conj().T)


def _rank_two_state(rng: np.random.Generator) -> np.ndarray:
    """Mixture of two random pure states, entangled more often than a full-rank draw."""
    gaussian = rng.standard_normal((2, 4, 2))
    psi = gaussian[..., 0] + 1j * gaussian[..., 1]
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    p = rng.uniform()
    rho = p * np.outer(psi[0], psi[0].conj()) + (1.0 - p) * np.outer(psi[1], psi[1].conj())
    return _symmetrize(rho)


SUITES: dict[str, Suite] = {
    "theorem1": VerificationService.theorem1,
    "obs1": VerificationService.obs1,
    "appendixA": VerificationService.appendixA,
    "radii": VerificationService.radii,
    "johnston": VerificationService.johnston,
    "concurrence": VerificationService.concurrence,
    "sas_consistency": VerificationService.sas_consistency,
    "linalg": VerificationService.linalg,
}
