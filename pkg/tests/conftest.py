import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from degenwave.carleman import SmoothModalSolution, bessel_mode
from degenwave.params import DomainSpec, validate_carleman_params
from degenwave.radial import solve_radial_basis


@pytest.fixture(scope="session")
def basis05():
    """Default eigenbasis: alpha = 0.5, 2048 cells, grading 2, 16 pairs."""
    return solve_radial_basis(0.5, N=2048, g=2.0, k_max=16)


@pytest.fixture(scope="session")
def basis05_k64():
    """Wide eigenbasis for ensemble experiments."""
    return solve_radial_basis(0.5, N=2048, g=2.0, k_max=64)


@pytest.fixture(scope="session")
def domain001():
    return DomainSpec(0.01)


@pytest.fixture(scope="session")
def carleman_params():
    """Canonical residual-test parameters: epsilon capped at T/16."""
    return validate_carleman_params(
        0.5, DomainSpec(0.03), beta=0.0149, T=40.0, lam=0.5, s=2.0
    )


@pytest.fixture(scope="session")
def bessel_solution():
    """One exact mode with mixed position/velocity content."""
    return SmoothModalSolution(0.5, (bessel_mode(0.5, 1, 1, a=1.0, b=0.3),))
