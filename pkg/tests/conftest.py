import pytest

from levypassage import brownian, cramer_lundberg, jump_diffusion


@pytest.fixture
def bm():
    return brownian(-1.0, 1.0)


@pytest.fixture
def cl():
    return cramer_lundberg(1.0, 1.0, 2.0)


@pytest.fixture
def jd():
    # two-sided jump diffusion with negative mean, gamma ~ 1.49
    return jump_diffusion(-1.0, 0.5, 1.0, [(0.5, 2.0, +1), (0.5, 1.5, -1)])


@pytest.fixture
def all_models(bm, cl, jd):
    return [bm, cl, jd]
