import numpy as np
import pytest

from neuralfield.problems import make_problem


@pytest.fixture(scope="session")
def p1():
    return make_problem("P1")


@pytest.fixture(scope="session")
def p4():
    return make_problem("P4")


@pytest.fixture(scope="session")
def p7p():
    return make_problem("P7p")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
