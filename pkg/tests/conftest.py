"""Shared oracles for the test suite.

The periodic-integral oracle evaluates Fourier coefficients of smooth
2*pi-periodic integrands by a uniform Riemann sum, which converges
geometrically and is independent of every series evaluation under test.
"""

import numpy as np
import pytest


def periodic_mean(fn, period: float, n_points: int = 8192) -> complex:
    """(1/T) * integral_0^T fn(t) dt by the uniform rule."""
    ts = np.arange(n_points) * (period / n_points)
    return complex(np.mean(fn(ts)))


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
