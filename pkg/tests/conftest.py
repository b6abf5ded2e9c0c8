"""
Pytest configuration and shared fixtures for catsim tests.
"""

import math

import numpy as np
import pytest
from click.testing import CliRunner

from catsim.config import get_settings
from catsim.core import coherent_algebra as ca
from catsim.core import gates
from catsim.models.coherent import CoherentSuperposition, QubitState
from tests.utils.test_helpers import StateFactory


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Rebuild settings from a clean environment for every test."""
    for name in (
        "CATSIM_TAIL_TOLERANCE",
        "CATSIM_ZERO_PROBABILITY",
        "CATSIM_MERGE_TOLERANCE",
        "CATSIM_TELEPORT_MAX_ROUNDS",
        "CATSIM_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def alpha() -> float:
    """The logical amplitude used throughout the published numbers."""
    return 2.0


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for sampled branches."""
    return np.random.default_rng(1234)


@pytest.fixture
def worst_case_qubit(alpha) -> QubitState:
    """The equal-weight input mu = nu."""
    return QubitState.worst_case(alpha)


@pytest.fixture
def generic_qubit(alpha) -> QubitState:
    """A qubit with unequal, complex weights."""
    return StateFactory.create_qubit(0.6, 0.8j, alpha)


@pytest.fixture
def bell_pair(alpha) -> CoherentSuperposition:
    """The Bell-cat resource at the fixture amplitude."""
    return gates.bell_resource(alpha)


@pytest.fixture
def two_qubit_plus(alpha) -> CoherentSuperposition:
    """Equal superposition of the four two-mode basis products."""
    return StateFactory.create_two_qubit_state(alpha)


@pytest.fixture
def cli_runner() -> CliRunner:
    """Click test runner."""
    return CliRunner()


@pytest.fixture
def quarter_turn() -> float:
    return math.pi / 2
