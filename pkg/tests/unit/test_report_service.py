"""Tests for spectrum classification and radius reports."""

from math import sqrt

import pytest

from sas_entanglement.config import get_settings
from sas_entanglement.exceptions import ValidationError
from sas_entanglement.services.report_service import UNDETERMINED, ReportService, normalize_spectrum
from sas_entanglement.three_qubit import R_MAX_CLOSED_FORM, R_MIN_CLOSED_FORM


@pytest.fixture
def fast_search(monkeypatch):
    """Shrink the orbit search through the environment."""
    monkeypatch.setenv("SAS_ORBIT_SEARCH__N_HAAR_SAMPLES", "200")
    monkeypatch.setenv("SAS_ORBIT_SEARCH__N_ASCENT_RESTARTS", "2")
    monkeypatch.setenv("SAS_ORBIT_SEARCH__MAX_ASCENT_ITERS", "2000")
    get_settings.cache_clear()


class TestNormalize:
    def test_rescales_and_sorts(self):
        assert normalize_spectrum([1.0, 2.0, 1.0], 2) == (0.5, 0.25, 0.25)

    @pytest.mark.parametrize(
        ("values", "n_qubits"),
        [
            ([0.5, 0.5], 2),
            ([0.5, 0.6, -0.1], 2),
            ([0.0, 0.0, 0.0], 2),
            ([0.5, float("nan"), 0.5], 2),
            ([0.2] * 5, 4),
        ],
    )
    def test_invalid_input(self, values, n_qubits):
        with pytest.raises(ValidationError):
            normalize_spectrum(values, n_qubits)


class TestClassifyTwoQubits:
    def test_boundary_spectrum(self):
        report = ReportService().classify([0.5, 0.25, 0.25], 2)
        assert report.verdict == "SAS"
        assert report.on_boundary
        assert report.reason.endswith("= 1")
        assert report.max_negativity == 0.0
        assert report.radius == pytest.approx(1 / (2 * sqrt(6)), abs=1e-7)

    def test_interior_spectrum(self):
        report = ReportService().classify([1, 1, 1], 2)
        assert report.verdict == "SAS"
        assert not report.on_boundary
        assert report.reason.endswith("> 1")

    @pytest.mark.parametrize(
        ("values", "expected"),
        [([1.0, 0.0, 0.0], 1.0), ([0.5, 0.3, 0.2], sqrt(0.26) - 0.5)],
    )
    def test_entangled_spectra(self, values, expected):
        report = ReportService().classify(values, 2)
        assert report.verdict == "not SAS"
        assert report.reason.endswith("< 1")
        assert report.max_negativity == pytest.approx(expected, abs=1e-12)
        assert report.max_negativity_kind == "closed_form"
        assert report.max_concurrence is not None


class TestClassifyThreeQubits:
    def test_maximally_mixed_is_undetermined(self, fast_search):
        report = ReportService(seed=4).classify([0.25] * 4, 3)
        assert report.verdict == "undetermined"
        assert report.reason == UNDETERMINED
        assert report.max_negativity == 0.0
        assert report.max_negativity_kind == "orbit_search_lower_bound"
        assert report.obs1_lambda_min == pytest.approx(1 / 12, abs=1e-12)
        assert report.obs1_pt_min == 0.0
        assert report.radius == 0.0

    def test_sufficient_condition(self, fast_search):
        report = ReportService(seed=4).classify([0.7, 0.1, 0.1, 0.1], 3)
        assert report.verdict == "not SAS"
        assert report.reason.startswith("Obs. 1 holds")
        assert report.obs1_margin is not None
        assert report.obs1_margin < 0
        assert report.obs1_pt_min == report.obs1_lambda_min < 0
        assert report.max_negativity > 0

    def test_settings_seed_is_the_default(self, monkeypatch):
        monkeypatch.setenv("SAS_ORBIT_SEARCH__SEED", "17")
        get_settings.cache_clear()
        assert ReportService().seed == 17
        assert ReportService(seed=3)._orbit_config().seed == 3


class TestRadii:
    def test_two_qubits(self):
        report = ReportService().radii(2)
        assert report.r_sas == pytest.approx(1 / (2 * sqrt(6)), abs=1e-12)
        assert report.R_sas == pytest.approx(2 / (3 * sqrt(6)), abs=1e-12)
        assert report.r_lower_bound == pytest.approx(1 / (2 * sqrt(42)), abs=1e-12)
        assert report.numerical["boundary_min"] == pytest.approx(report.r_sas, abs=1e-9)
        assert report.numerical["boundary_max"] == pytest.approx(report.R_sas, abs=1e-9)
        assert report.estimate is None

    def test_three_qubits(self):
        report = ReportService().radii(3)
        assert report.r_lower_bound == pytest.approx(1 / (10 * sqrt(11)), abs=1e-12)
        assert report.r_sas_upper == R_MIN_CLOSED_FORM
        assert report.R_sas_upper == R_MAX_CLOSED_FORM
        assert report.numerical["boundary_min"] == pytest.approx(R_MIN_CLOSED_FORM, abs=1e-9)
        assert report.numerical["boundary_max"] == pytest.approx(R_MAX_CLOSED_FORM, abs=1e-9)

    def test_three_qubit_estimate(self, monkeypatch):
        monkeypatch.setenv("SAS_ESTIMATOR__N_SPECTRA", "50")
        monkeypatch.setenv("SAS_ESTIMATOR__N_ORBIT_SAMPLES", "20")
        get_settings.cache_clear()
        report = ReportService(seed=8).radii(3, estimate=True)
        assert report.estimate is not None
        assert report.estimate_bracket == (report.estimate, R_MAX_CLOSED_FORM)
        assert report.seed == 8

    def test_unsupported_size(self):
        with pytest.raises(ValidationError):
            ReportService().radii(4)
