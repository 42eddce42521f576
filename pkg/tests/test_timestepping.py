import numpy as np
import pytest

from conftest import make_disc
from wenoadj import oracle
from wenoadj.errors import ConfigurationError, IntegrationError
from wenoadj.flux import burgers
from wenoadj.mesh import Grid1D, sample
from wenoadj.timestepping import (Discretization, TimeGrid, eo_step, erk4_step, integrate,
                                  lf_step, ssprk3_step)

B = burgers()


@pytest.mark.parametrize("step", [ssprk3_step, erk4_step])
def test_zero_rhs_is_identity(step):
    y = np.array([0.3, -1.0, 2.0])
    y1, _ = step(y, 0.1, lambda v: 0 * v)
    np.testing.assert_array_equal(y1, y)


@pytest.mark.parametrize("step, order", [(ssprk3_step, 3), (erk4_step, 4)])
def test_linear_ode_taylor_polynomial(step, order):
    from math import factorial
    lam, dt = -1.3, 0.2
    z = lam * dt
    y1, _ = step(np.array([1.0]), dt, lambda v: lam * v)
    assert y1[0] == pytest.approx(sum(z ** k / factorial(k) for k in range(order + 1)), abs=1e-15)


def test_stage_states():
    y1, st = ssprk3_step(np.array([1.0]), 0.5, lambda v: -v)
    # y1 = 0.5; y2 = 0.75 + 0.25*0.5 - 0.125*0.5 = 0.8125
    np.testing.assert_allclose(np.concatenate(st), [1.0, 0.5, 0.8125])
    assert y1[0] == pytest.approx(1 / 3 + 2 / 3 * 0.8125 * (1 - 0.5))


def test_erk4_global_order_on_cos():
    # autonomous form of y' = cos(t): state (y, t) with t' = 1
    rhs = lambda v: np.array([np.cos(v[1]), 1.0])
    errs = []
    for n in (10, 20, 40, 80):
        v = np.array([0.0, 0.0])
        for _ in range(n):
            v, _ = erk4_step(v, 2.0 / n, rhs)
        errs.append(abs(v[0] - np.sin(2.0)))
    rates = np.log2(np.array(errs[:-1]) / errs[1:])
    assert rates[-1] == pytest.approx(4.0, abs=0.2)


def test_time_grid():
    t = TimeGrid.from_ratio(0.5, 0.01, 0.25)
    assert t.n_steps == 200 and t.dt == pytest.approx(0.0025)
    assert t.cfl_ratio == pytest.approx(0.25)
    assert t.times[-1] == pytest.approx(0.5)
    with pytest.raises(ConfigurationError):
        TimeGrid(-1.0, 10, 0.1)


def test_discretization_validation():
    g = Grid1D(-1, 1, 10)
    with pytest.raises(ConfigurationError):
        Discretization(g, TimeGrid(0.5, 10, g.dx), "weno5")
    with pytest.raises(ConfigurationError):
        Discretization(g, TimeGrid(0.5, 10, 0.3), "lf")
    with pytest.raises(ConfigurationError):
        Discretization(g, TimeGrid(0.5, 10, g.dx), "lf", gamma=1.5)


def test_lf_and_eo_hand_step():
    g = Grid1D(-1, 1, 4)  # dx = 0.5
    y = np.array([1.0, 1.0, 0.0, 0.0])
    np.testing.assert_allclose(lf_step(y, 0.1, 0.5, B, g), [0.7, 0.8, 0.3, 0.0], atol=1e-15)
    np.testing.assert_allclose(eo_step(y, 0.1, B, g), [0.9, 1.0, 0.1, 0.0], atol=1e-15)


@pytest.mark.parametrize("step", ["lf", "eo"])
def test_monotone_step_keeps_interior_constant(step):
    g = Grid1D(-1, 1, 20)
    y = np.full(20, 0.4)
    ynew = lf_step(y, 0.02, 0.5, B, g) if step == "lf" else eo_step(y, 0.02, B, g)
    np.testing.assert_allclose(ynew[1:-1], 0.4, rtol=0, atol=1e-15)


def test_cfl_violation_raises():
    g = Grid1D(-1, 1, 4)
    with pytest.raises(ConfigurationError, match="CFL"):
        lf_step(np.array([2.0, 0, 0, 0]), 0.2, 0.5, B, g)
    with pytest.raises(ConfigurationError, match="CFL"):
        eo_step(np.array([2.0, 0, 0, 0]), 0.2, B, g)


@pytest.mark.parametrize("scheme", ["weno3-ssprk3", "weno3-erk4", "lf", "eo"])
def test_stationary_shock_conserves_mass(scheme):
    disc = make_disc(scheme, n=100, t_final=0.5)
    traj = integrate(sample(oracle.example1_initial, disc.grid), disc, track_mass=True)
    assert np.max(np.abs(np.diff(traj.mass))) <= 1e-13
    # the shock stays at x = 0: antisymmetric profile, smeared over a few cells
    x, y = disc.grid.x, traj.final
    np.testing.assert_allclose(y, -y[::-1], rtol=0, atol=1e-12)
    assert np.all(np.sign(y) == -np.sign(x))
    window = (np.abs(x) > 0.1) & (np.abs(x) < 0.5)
    assert np.max(np.abs(y[window] + np.sign(x[window]))) < 0.2


def test_zero_steps():
    g = Grid1D(-1, 1, 8)
    disc = Discretization(g, TimeGrid(0.0, 0, g.dx), "weno3-ssprk3")
    u0 = np.linspace(-1, 1, 8)
    traj = integrate(u0, disc)
    np.testing.assert_array_equal(traj.final, u0)
    assert traj.n_steps == 0
    np.testing.assert_array_equal(traj.states(), u0[None])


def test_trajectory_records_stages():
    disc = make_disc("weno3-erk4", n=32, n_steps=5)
    traj = integrate(np.sin(np.pi * disc.grid.x), disc)
    assert traj.stages.shape == (5, 4, 32)
    assert traj.states().shape == (6, 32)
    off = integrate(np.sin(np.pi * disc.grid.x), disc, record=False)
    np.testing.assert_array_equal(off.final, traj.final)
    assert not off.recorded


def test_lf_cfl_checked_on_initial_data():
    disc = make_disc("lf", n=40, ratio=0.5, n_steps=3)
    with pytest.raises(ConfigurationError):
        integrate(np.full(40, 2.0), disc)


def test_blow_up_reported():
    disc = make_disc("weno3-ssprk3", n=40, ratio=40.0, n_steps=200)
    with pytest.raises(IntegrationError) as exc:
        integrate(np.sin(np.pi * disc.grid.x), disc, record=False)
    assert exc.value.step is not None


def test_smooth_forward_third_order():
    errs = []
    for n in (1200, 2400):
        g = Grid1D(-1.5, 1.5, n)
        disc = Discretization(g, TimeGrid.from_ratio(0.5, g.dx, 0.5), "weno3-ssprk3")
        traj = integrate(sample(oracle.smooth_bump, g), disc, record=False)
        ref = oracle.characteristics_solution(oracle.smooth_bump, 0.5, g.x,
                                              du0=oracle.smooth_bump_derivative)
        errs.append(np.max(np.abs(traj.final - ref)))
    assert np.log2(errs[0] / errs[1]) == pytest.approx(3.0, abs=0.3)
