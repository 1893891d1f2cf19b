"""Shared fixtures for the test suite."""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add the repository root so tests import services/ and utils/ directly
sys.path.insert(0, str(Path(__file__).parent.parent))

from services.linking_pairing import LinkingPairing, orthogonal_sum, pairing_lw  # noqa: E402
from services.report_service import ReportService  # noqa: E402
from services.seifert import SeifertData  # noqa: E402


@pytest.fixture
def poincare_sphere() -> SeifertData:
    return SeifertData(0, ((2, 1), (3, 1), (5, 1), (1, -1)))


@pytest.fixture
def hantzsche_wendt() -> SeifertData:
    return SeifertData(-1, ((2, 1), (2, -1)))


@pytest.fixture
def hyperbolic_three() -> LinkingPairing:
    """l_{1/3} + l_{-1/3}, the hyperbolic form on (Z/3)^2."""
    return orthogonal_sum(pairing_lw(Fraction(1, 3)), pairing_lw(Fraction(-1, 3)))


@pytest.fixture(scope="session")
def report_service() -> ReportService:
    return ReportService(category="both")
