"""Shared fixtures."""

import logging

import numpy as np
import pytest

from sas_entanglement.config import OrbitSearchConfig, get_settings
from sas_entanglement.linalg import make_rng
from sas_entanglement.models.domain import Spectrum3, SymmetricDensityMatrix
from sas_entanglement.symmetric_space import diagonal_state


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from default settings and an unconfigured package logger."""
    monkeypatch.delenv("SAS_CONFIG_FILE", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
    package_logger = logging.getLogger("sas_entanglement")
    package_logger.handlers.clear()
    package_logger.setLevel(logging.NOTSET)


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(20240611)


@pytest.fixture
def small_search() -> OrbitSearchConfig:
    """Orbit search sized for unit tests."""
    return OrbitSearchConfig(n_haar_samples=500, n_ascent_restarts=6, seed=11)


@pytest.fixture
def dicke_one() -> SymmetricDensityMatrix:
    """|D_2^(1)><D_2^(1)|, the symmetric Bell-like state."""
    return diagonal_state(2, (0.0, 1.0, 0.0))


@pytest.fixture
def green_endpoint() -> Spectrum3:
    return Spectrum3((0.5, 0.25, 0.25))


@pytest.fixture
def orange_endpoint() -> Spectrum3:
    return Spectrum3((4.0 / 9.0, 4.0 / 9.0, 1.0 / 9.0))

