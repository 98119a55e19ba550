import numpy as np
import pytest

from chkp import WaveParams, solve_profile


@pytest.fixture(scope="session")
def prof_14():
    """Reference wave at k=1, c=4 on the default grid."""
    return solve_profile(WaveParams(1.0, 4.0))


@pytest.fixture(scope="session")
def prof_135():
    """Reference wave at k=1, c=3.5, used by the discretization tests."""
    return solve_profile(WaveParams(1.0, 3.5))


@pytest.fixture(scope="session")
def small_amplitude_profiles():
    """Profiles at c = 3 + eps^2 for eps in {0.05, 0.1, 0.2} (k = 1)."""
    out = {}
    for eps in (0.05, 0.1, 0.2):
        out[eps] = solve_profile(WaveParams(1.0, 3.0 + eps**2))
    return out


def pairwise_even_defect(x: np.ndarray, values: np.ndarray) -> float:
    """Max |f(x) - f(-x)| on a symmetric grid (mirror index pairing)."""
    return float(np.max(np.abs(values - values[::-1])))
