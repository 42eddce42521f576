import numpy as np
import pytest

from conftest import make_disc
from wenoadj import oracle, verify
from wenoadj.adjoint import (adjoint_eo_sweep, adjoint_erk4_sweep, adjoint_lf_sweep,
                             adjoint_ssprk3_sweep, adjoint_sweep, eo_coefficients,
                             lf_coefficients, terminal_data)
from wenoadj.errors import ConfigurationError
from wenoadj.flux import burgers
from wenoadj.mesh import Grid1D, sample
from wenoadj.spatial import BandedJacobian
from wenoadj.timestepping import SCHEMES, Discretization, TimeGrid, integrate

B = burgers()


def test_terminal_data():
    y = np.array([1.0, 2.0, 3.0])
    assert not terminal_data(y, y).any()
    np.testing.assert_array_equal(terminal_data(y, np.zeros(3)), y)
    np.testing.assert_array_equal(terminal_data(y, np.zeros(3), [True, False, True]), [1, 0, 3])
    with pytest.raises(ConfigurationError):
        terminal_data(y, np.zeros(4))


def test_example1_terminal_data_is_minus_sign():
    g = Grid1D(-1, 1, 200)
    pT = terminal_data(sample(oracle.example1_initial, g), np.zeros(200))
    np.testing.assert_array_equal(pT, -np.sign(g.x))


@pytest.mark.parametrize("sweep, scheme", [(adjoint_ssprk3_sweep, "weno3-ssprk3"),
                                           (adjoint_erk4_sweep, "weno3-erk4")])
def test_zero_jacobian_passes_terminal_data_through(rng, sweep, scheme):
    disc = make_disc(scheme, n=20, n_steps=6)
    traj = integrate(rng.uniform(-1, 1, 20), disc)
    pT = rng.standard_normal(20)
    zero = BandedJacobian(np.zeros((5, 20)))
    res = sweep(traj, pT, jac=lambda y: zero, snapshots=True)
    np.testing.assert_allclose(res.p0, pT, rtol=1e-15)
    assert res.snapshots.shape == (7, 20)
    np.testing.assert_allclose(res.snapshots, np.broadcast_to(pT, (7, 20)), rtol=1e-15)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_zero_terminal_data_zero_adjoint(rng, scheme):
    disc = make_disc(scheme, n=24, n_steps=5)
    traj = integrate(rng.uniform(-1, 1, 24), disc)
    assert not adjoint_sweep(traj, np.zeros(24)).p0.any()


@pytest.mark.parametrize("scheme", SCHEMES)
def test_dot_product_identity(scheme):
    assert verify.dot_product_gap(scheme, seed=3) <= 1e-11


def test_wrong_trajectory_rejected(rng):
    disc = make_disc("eo", n=16, n_steps=3)
    traj = integrate(rng.uniform(-1, 1, 16), disc)
    with pytest.raises(ConfigurationError):
        adjoint_lf_sweep(traj, np.zeros(16), 0.5)
    with pytest.raises(ConfigurationError):
        adjoint_ssprk3_sweep(traj, np.zeros(16))
    lf = integrate(rng.uniform(-1, 1, 16), make_disc("lf", n=16, n_steps=3))
    with pytest.raises(ConfigurationError, match="gamma"):
        adjoint_lf_sweep(lf, np.zeros(16), 0.7)
    unrecorded = integrate(rng.uniform(-1, 1, 16), disc, record=False)
    with pytest.raises(ConfigurationError):
        adjoint_eo_sweep(unrecorded, np.zeros(16))


def _one_step(scheme):
    g = Grid1D(-1, 1, 4)  # dx = 0.5, dt/dx = 0.2
    disc = Discretization(g, TimeGrid(0.1, 1, g.dx), scheme)
    return integrate(np.array([1.0, 1.0, 0.0, 0.0]), disc)


def test_lf_hand_sweep():
    p0 = adjoint_lf_sweep(_one_step("lf"), np.array([1.0, 2.0, 3.0, 4.0]), 0.5).p0
    np.testing.assert_allclose(p0, [1.2, 2.2, 3.0, 2.75], rtol=0, atol=1e-15)


def test_eo_hand_sweep():
    p0 = adjoint_eo_sweep(_one_step("eo"), np.array([1.0, 2.0, 3.0, 4.0])).p0
    np.testing.assert_allclose(p0, [1.2, 2.2, 3.0, 4.0], rtol=0, atol=1e-15)


def test_coefficient_sums_and_signs(rng):
    y = rng.uniform(-1, 1, 200)
    lam = 0.25
    for c in (lf_coefficients(y, lam, 0.5, B), eo_coefficients(y, lam, B)):
        np.testing.assert_allclose(sum(c), 1.0, rtol=0, atol=1e-15)
        assert min(np.min(ci) for ci in c) >= 0.0
    cl, cm, cr = lf_coefficients(np.zeros(5), lam, 0.5, B)
    np.testing.assert_allclose([cl, cm, cr], 1 / 4 + np.zeros((3, 5)) + [[0], [0.25], [0]])


def test_eo_rest_rows_copy():
    cl, cm, cr = eo_coefficients(np.zeros(3), 0.3, B)
    assert not cl.any() and not cr.any() and np.all(cm == 1.0)


@pytest.mark.parametrize("scheme", ["lf", "eo"])
def test_monotone_adjoint_max_principle(rng, scheme):
    disc = make_disc(scheme, n=60, n_steps=30)
    traj = integrate(rng.uniform(-1, 1, 60), disc)
    snaps = adjoint_sweep(traj, rng.standard_normal(60), snapshots=True).snapshots
    peaks = np.abs(snaps).max(axis=1)
    assert np.all(peaks[:-1] <= peaks[1:] * (1 + 1e-14))


def test_smooth_adjoint_third_order():
    errs = []
    for n in (1200, 2400):
        g = Grid1D(-1.5, 1.5, n)
        disc = Discretization(g, TimeGrid.from_ratio(0.5, g.dx, 0.5), "weno3-erk4")
        u0 = sample(oracle.smooth_bump, g)
        traj = integrate(u0, disc)
        p0 = adjoint_sweep(traj, terminal_data(traj.final, np.zeros(n))).p0
        errs.append(np.max(np.abs(p0 - u0)))
    assert np.log2(errs[0] / errs[1]) == pytest.approx(3.0, abs=0.3)


def test_example1_funnel_small_on_fine_grid():
    g = Grid1D.from_spacing(-1, 1, 0.002)
    disc = Discretization(g, TimeGrid.from_ratio(0.5, g.dx, 0.5), "eo")
    traj = integrate(sample(oracle.example1_initial, g), disc)
    p0 = adjoint_sweep(traj, terminal_data(traj.final, np.zeros(g.n_cells))).p0
    assert oracle.funnel_error(g.x, p0) < 1e-12
