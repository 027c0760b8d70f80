import numpy as np
import pytest

from tomokit.cvstates import coherent_state, fock_state, thermal_state


@pytest.fixture(scope="session")
def vacuum():
    return fock_state(0)


@pytest.fixture(scope="session")
def fock1():
    return fock_state(1)


@pytest.fixture(scope="session")
def coherent1():
    return coherent_state(1.0)


@pytest.fixture(scope="session")
def thermal_half():
    return thermal_state(0.5)


def gaussian(x, mean, var):
    return np.exp(-((x - mean) ** 2) / (2 * var)) / np.sqrt(2 * np.pi * var)
