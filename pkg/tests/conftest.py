import numpy as np
import pytest
from scipy.stats import unitary_group


def random_state(rng, n):
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return v / np.linalg.norm(v)


def random_unitary(rng):
    return unitary_group.rvs(2, random_state=rng)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
