import numpy as np
import pytest

from fextremal.algebra import euclidean
from fextremal.laws import discrete_kappa
from fextremal.measure import lebesgue
from fextremal.supmeasure import SupMeasureSpec


@pytest.fixture
def loss2():
    return euclidean(2)


@pytest.fixture
def kappa3(loss2):
    return discrete_kappa(loss2, [[1, 0], [0, 1], [1, 1]], [0.5, 0.3, 0.2])


@pytest.fixture
def spec2(loss2, kappa3):
    return SupMeasureSpec(loss2, 2.0, kappa3, lebesgue())


@pytest.fixture
def spec1(loss2, kappa3):
    return SupMeasureSpec(loss2, 1.0, kappa3, lebesgue())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
