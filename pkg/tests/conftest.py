import numpy as np
import pytest

from tailsum import CenteredPareto, Geometric, Pareto


@pytest.fixture
def pareto4():
    return Pareto(4.0)


@pytest.fixture
def centered4():
    return CenteredPareto(4.0)


@pytest.fixture
def geo09():
    return Geometric(0.9)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
