import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_density_matrix(rng, dim, rank=None):
    G = rng.normal(size=(dim, rank or dim))
    rho = G @ G.T
    return rho / np.trace(rho)
