import numpy as np
import pytest

from entire_dyn.functions import Poincare, Sigma, sine


@pytest.fixture(scope="session")
def sin_f():
    return sine()


@pytest.fixture(scope="session")
def exp_f():
    return Poincare.from_polynomial((0, 0, 1), z0=1)


@pytest.fixture(scope="session")
def cosh_f():
    return Poincare.from_polynomial((-1, 0, 2), z0=1)


@pytest.fixture(scope="session")
def sigma_i():
    return Sigma(1j)


def random_disk(rng, n, radius):
    """Points uniform in the disk ``|z| <= radius``."""
    r = radius * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))
