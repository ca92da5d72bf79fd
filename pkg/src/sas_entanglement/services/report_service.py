"""Report service - classification of spectra and ball-radius reports."""

from collections.abc import Sequence
from math import sqrt

import numpy as np
from codetiming import Timer

from sas_entanglement.config import OrbitSearchConfig, get_logger, get_settings
from sas_entanglement.exceptions import DomainError, ValidationError
from sas_entanglement.models.api import ClassificationReport, RadiiReport
from sas_entanglement.models.domain import Spectrum3, Spectrum4Sym
from sas_entanglement.three_qubit import (
    R_MAX_CLOSED_FORM,
    ball_radii_3qubit,
    dicke_mixture_state,
    estimate_R_sas_3qubit,
    lambda_min_obs1,
    not_sas_3qubit,
    obs1_boundary_extrema,
    obs1_margin,
    spectrum_radius,
)
from sas_entanglement.two_qubit import (
    ball_radii_2qubit,
    is_sas,
    max_concurrence_su3,
    max_negativity_su3,
    r_of_spectrum,
    sas_boundary_extrema,
)
from sas_entanglement.workers.orbit_search import orbit_maximize

logger = get_logger(__name__)

UNDETERMINED_NOT_SAS = "undetermined by Obs. 1; orbit search found negativity > 0 ⇒ not SAS"
UNDETERMINED = "undetermined by Obs. 1; orbit search found no entangled state"


def normalize_spectrum(values: Sequence[float], n_qubits: int) -> tuple[float, ...]:
    """Validate user input and rescale it to unit sum, sorted non-ascending."""
    tol = get_settings().tolerances
    if n_qubits not in (2, 3):
        raise ValidationError(f"Only 2 or 3 qubits are supported, got {n_qubits}")
    array = np.asarray(values, dtype=np.float64)
    if array.size != n_qubits + 1:
        raise ValidationError(f"A {n_qubits}-qubit symmetric spectrum has {n_qubits + 1} values, got {array.size}")
    if not np.all(np.isfinite(array)):
        raise ValidationError(f"Spectrum has non-finite entries: {array.tolist()}")
    if np.min(array) < -tol.negative_entry:
        raise ValidationError(f"Spectrum has negative entries: {array.tolist()}")
    array = np.clip(array, 0.0, None)
    total = float(array.sum())
    if total <= 0.0:
        raise ValidationError("Spectrum cannot be normalized (sum is zero)")
    return tuple(float(v) for v in np.sort(array / total)[::-1])


class ReportService:
    """Classify spectra and collect the closed-form and numerical ball radii."""

    def __init__(self, seed: int | None = None):
        self.settings = get_settings()
        self.seed = self.settings.orbit_search.seed if seed is None else seed

    def _orbit_config(self) -> OrbitSearchConfig:
        return self.settings.orbit_search.model_copy(update={"seed": self.seed})

    def classify(self, values: Sequence[float], n_qubits: int) -> ClassificationReport:
        """Classify one spectrum; N = 2 is decided in closed form, N = 3 by the Dicke-mixture condition then orbit search."""
        spectrum = normalize_spectrum(values, n_qubits)
        logger.info("Classifying spectrum", extra={"n_qubits": n_qubits, "spectrum": list(spectrum)})
        if n_qubits == 2:
            return self._classify_two(Spectrum3(spectrum))
        return self._classify_three(Spectrum4Sym(spectrum))

    def _classify_two(self, s: Spectrum3) -> ClassificationReport:
        _, t2, t3 = s.tau
        sqrt_sum = sqrt(t2) + sqrt(t3)
        sas = is_sas(s)
        on_boundary = abs(sqrt_sum - 1.0) <= self.settings.tolerances.sas_boundary_slack
        relation = "=" if on_boundary else (">" if sas else "<")
        return ClassificationReport(
            n_qubits=2,
            spectrum=list(s.values),
            max_negativity=max_negativity_su3(s),
            max_negativity_kind="closed_form",
            verdict="SAS" if sas else "not SAS",
            reason=f"sqrt(tau2) + sqrt(tau3) = {sqrt_sum:.12f} {relation} 1",
            on_boundary=on_boundary,
            radius=r_of_spectrum(s),
            max_concurrence=max_concurrence_su3(s),
        )

    @Timer(name="classify_three", text="Three-qubit classification: {:.2f}s", logger=logger.debug)
    def _classify_three(self, s: Spectrum4Sym) -> ClassificationReport:
        margin = obs1_margin(s)
        try:
            lambda_min: float | None = lambda_min_obs1(s)
        except DomainError as e:
            logger.warning(f"Closed-form eigenvalue unavailable: {e}")
            lambda_min = None

        # Step 1: sufficient condition
        obs1 = not_sas_3qubit(s)

        # Step 2: orbit search lower bound on the maximal negativity
        result = orbit_maximize(dicke_mixture_state(s), "negativity", self._orbit_config())
        entangled = result.best_value > self.settings.tolerances.separable_negativity

        if obs1:
            verdict, reason = "not SAS", f"Obs. 1 holds (margin {margin:.6g} < 0, tau3 > 0) ⇒ not SAS"
        elif entangled:
            verdict, reason = "not SAS", UNDETERMINED_NOT_SAS
        else:
            verdict, reason = "undetermined", UNDETERMINED

        radius = float(spectrum_radius(s.as_array()))
        return ClassificationReport(
            n_qubits=3,
            spectrum=list(s.values),
            max_negativity=result.best_value,
            max_negativity_kind="orbit_search_lower_bound",
            verdict=verdict,
            reason=reason,
            radius=radius,
            obs1_margin=margin,
            obs1_lambda_min=lambda_min,
            obs1_pt_min=None if lambda_min is None else min(lambda_min, 0.0),
        )

    def radii(self, n_qubits: int, estimate: bool = False) -> RadiiReport:
        """Closed-form radii plus their numerical reproduction; optionally the Monte-Carlo R_SAS estimate."""
        if n_qubits == 2:
            r_sas, R_sas, lower = ball_radii_2qubit()
            r_min, tau_min, r_max, tau_max = sas_boundary_extrema()
            if estimate:
                logger.warning("The Monte-Carlo estimate is only defined for three qubits; ignoring --estimate")
            return RadiiReport(
                n_qubits=2,
                r_sas=r_sas,
                R_sas=R_sas,
                r_lower_bound=lower,
                numerical={"boundary_min": r_min, "boundary_min_tau3": tau_min, "boundary_max": r_max, "boundary_max_tau3": tau_max},
            )

        if n_qubits != 3:
            raise ValidationError(f"Only 2 or 3 qubits are supported, got {n_qubits}")

        lower, r_upper, R_upper = ball_radii_3qubit()
        r_min, (t3_min, t4_min), r_max, (t3_max, t4_max) = obs1_boundary_extrema()
        report = RadiiReport(
            n_qubits=3,
            r_lower_bound=lower,
            r_sas_upper=r_upper,
            R_sas_upper=R_upper,
            numerical={
                "boundary_min": r_min,
                "boundary_min_tau3": t3_min,
                "boundary_min_tau4": t4_min,
                "boundary_max": r_max,
                "boundary_max_tau3": t3_max,
                "boundary_max_tau4": t4_max,
            },
        )
        if estimate:
            cfg = self.settings.estimator
            value = estimate_R_sas_3qubit(cfg.n_spectra, cfg.n_orbit_samples, self.seed)
            report.estimate = value
            report.estimate_bracket = (value, R_MAX_CLOSED_FORM)
            report.seed = self.seed
        return report
