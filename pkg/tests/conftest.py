import numpy as np
import pytest

from diffw.weights import SampleDomain


@pytest.fixture
def dom1():
    return SampleDomain(1)


@pytest.fixture
def dom2():
    return SampleDomain(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
