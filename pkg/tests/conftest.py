import numpy as np
import pytest

from nlsground import Field, GridSpec, PhysParams, StatePair


def make_params(p=3.0, lam=1.0, sigma1=1.0, sigma2=1.0, omega=1.0):
    return PhysParams(sigma1=sigma1, sigma2=sigma2, omega=omega, lam=lam, p=p)


def random_field(grid, rng, positive=False):
    if positive:
        vals = rng.uniform(0.2, 1.0, grid.num_nodes)
    else:
        vals = rng.standard_normal(grid.num_nodes)
    return Field(grid, vals)


def random_state(grid, rng, positive=False):
    return StatePair(random_field(grid, rng, positive), random_field(grid, rng, positive))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def grid1d():
    return GridSpec(dim=1, half_width=8.0, nodes_per_axis=65)


@pytest.fixture
def grid2d():
    return GridSpec(dim=2, half_width=3.0, nodes_per_axis=17)
