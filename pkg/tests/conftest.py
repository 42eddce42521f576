import numpy as np
import pytest

from wenoadj.mesh import Grid1D
from wenoadj.timestepping import Discretization, TimeGrid


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make_disc(scheme, a=-1.0, b=1.0, n=64, ratio=0.25, t_final=None, n_steps=None, **kw):
    grid = Grid1D(a, b, n)
    if n_steps is not None:
        time = TimeGrid(n_steps * ratio * grid.dx, n_steps, grid.dx)
    else:
        time = TimeGrid.from_ratio(t_final, grid.dx, ratio)
    return Discretization(grid, time, scheme, **kw)
