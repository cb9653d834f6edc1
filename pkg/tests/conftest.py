import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def seeded():
    """Factory of independent generators for tests that need several."""
    def make(seed):
        return np.random.default_rng(seed)
    return make
