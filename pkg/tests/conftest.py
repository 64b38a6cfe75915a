import numpy as np
import pytest

from dqthermo import gibbs_state

H_QUBIT = np.diag([0.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def qubit_h():
    return H_QUBIT.copy()


@pytest.fixture
def gibbs1():
    return gibbs_state(H_QUBIT, 1.0)


@pytest.fixture
def gibbs2():
    return gibbs_state(H_QUBIT, 2.0)
