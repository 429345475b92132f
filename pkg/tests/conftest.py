import numpy as np
import pytest
from hypothesis import strategies as st

from uncertainty_bounds.harness import random_hermitian, random_state, trial_rng
from uncertainty_bounds.systems import build

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)

QUARTER = np.pi / 4
HALF = np.pi / 2

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=6)


def random_setup(seed, dim, n_obs=2):
    """Deterministic random Hermitians and a state for property tests."""
    rng = trial_rng(seed, 0)
    obs = [random_hermitian(dim, rng) for _ in range(n_obs)]
    return obs, random_state(dim, rng), rng


@pytest.fixture(scope="session")
def nq():
    return build("number_quadrature")


@pytest.fixture(scope="session")
def spin1():
    return build("spin1")


@pytest.fixture(scope="session")
def su11():
    return build("su11")
