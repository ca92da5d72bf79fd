"""Tests for the verification suites."""

import pytest

from sas_entanglement.exceptions import VerificationError
from sas_entanglement.services.verification_service import SUITES, VerificationService, _check, _flag


@pytest.mark.parametrize("suite", ["appendixA", "johnston", "sas_consistency", "linalg"])
def test_quick_suites_pass(suite):
    report = VerificationService(scale="quick", seed=0).run(suite)
    failed = [check.name for check in report.checks if not check.passed]
    assert report.passed, failed
    assert report.suite == suite
    assert report.scale == "quick"
    assert all(check.name.startswith(f"{suite}.") for check in report.checks)


def test_obs1_suite_reproduces_counterexample():
    report = VerificationService(seed=1).run("obs1")
    counterexample = next(check for check in report.checks if check.name == "obs1.counterexample")
    assert counterexample.passed
    assert counterexample.details["pt_min_eigenvalue"] < 0
    assert counterexample.details["margin"] == pytest.approx(0.005, abs=1e-4)


def test_same_seed_same_checks():
    first = VerificationService(seed=7).run("appendixA")
    second = VerificationService(seed=7).run("appendixA")
    assert [c.max_deviation for c in first.checks] == [c.max_deviation for c in second.checks]


def test_unknown_suite():
    with pytest.raises(VerificationError):
        VerificationService().run("theorem2")


def test_unknown_scale():
    with pytest.raises(VerificationError):
        VerificationService(scale="huge")


def test_suite_names():
    assert list(SUITES) == ["theorem1", "obs1", "appendixA", "radii", "johnston", "concurrence", "sas_consistency", "linalg"]


class TestCheckHelpers:
    def test_check_passes_within_tolerance(self):
        check = _check("x", [1e-12, 5e-11], 1e-10, note="n")
        assert check.passed
        assert check.samples == 2
        assert check.max_deviation == 5e-11
        assert check.details == {"note": "n"}

    def test_check_fails_beyond_tolerance(self):
        assert not _check("x", [1e-3], 1e-10).passed

    def test_empty_check_passes(self):
        check = _check("x", [], 1e-10)
        assert check.passed
        assert check.samples == 0

    def test_flag(self):
        check = _flag("y", False, samples=3, errors=2)
        assert not check.passed
        assert check.max_deviation is None
        assert check.details == {"errors": 2}


def test_linalg_suite_covers_both_haar_dimensions():
    report = VerificationService(seed=2).run("linalg")
    checks = {check.name: check for check in report.checks}
    assert checks["linalg.haar_unitarity"].samples == 1000
    assert checks["linalg.haar_determinant"].passed
