import numpy as np
import pytest

from wtbouss.spectral import GridSpec, random_bandlimited
from wtbouss.systems import State
from wtbouss.unknowns import from_ptheta


@pytest.fixture
def grid32():
    return GridSpec(32, 32)


@pytest.fixture
def grid64():
    return GridSpec(64, 64)


def random_curl_free(case, grid, eps, amplitude, seed):
    """Curl-free state built from random band-limited ``(p, theta)``."""
    rng = np.random.default_rng(seed)
    p = amplitude * random_bandlimited(grid, rng)
    th = amplitude * random_bandlimited(grid, rng)
    return from_ptheta(case, p, th, eps, grid)


def random_state(grid, amplitude, seed):
    rng = np.random.default_rng(seed)
    return State(*(amplitude * random_bandlimited(grid, rng) for _ in range(3)))
