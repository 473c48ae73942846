"""Shared fixtures for the unit tests."""

import numpy as np
import pytest

from bloch_verifier.quadrature.sphere import build_grid


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def grid():
    """The default 4 x 8 grid."""
    return build_grid(4, 8)
