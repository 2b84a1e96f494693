import numpy as np
import pytest

from robustbayes import ChainState, Dataset


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_regression(rng, n=50, p=3, alpha=0.3, sigma=1.0, has_intercept=True):
    X = rng.standard_normal((n, p))
    beta = rng.normal(0.0, 1.5, p)
    y = (alpha if has_intercept else 0.0) + X @ beta + sigma * rng.standard_normal(n)
    return Dataset(y, X, has_intercept=has_intercept), beta


@pytest.fixture
def small_data(rng):
    data, _ = make_regression(rng)
    return data


@pytest.fixture
def unit_state():
    return ChainState.initial(3)
