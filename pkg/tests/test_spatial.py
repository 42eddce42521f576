import numpy as np
import pytest

from wenoadj import oracle
from wenoadj.errors import ConfigurationError
from wenoadj.flux import FluxModel, burgers, split_bound
from wenoadj.mesh import Grid1D
from wenoadj.spatial import (BandedJacobian, interface_fluxes, jacobian_transpose_apply,
                             weno3_jacobian, weno3_operator, weno3_rhs)

B = burgers()
# same flux, but not recognised by name: exercises the generic (non-fused) path
B_GENERIC = FluxModel("burgers-generic", B.f, B.df, B.eo_plus, B.eo_minus, 0.0)


def test_zero_state_zero_rhs():
    assert not weno3_rhs(np.zeros(16), B, 1.0, 0.1).any()


def test_constant_state_interior_zero():
    y = np.full(20, 0.6)
    r = weno3_rhs(y, B, 0.6, 0.1)
    assert np.max(np.abs(r[2:-2])) < 1e-14
    assert np.abs(r[[0, -1]]).min() > 1e-3


def test_rhs_rejects_non_finite():
    with pytest.raises(ConfigurationError):
        weno3_rhs(np.array([0.0, np.inf, 0.0]), B, 1.0, 0.1)


def test_fused_and_generic_operator_agree(rng):
    y = rng.uniform(-1, 1, 40)
    a = split_bound(B, y)
    np.testing.assert_allclose(weno3_rhs(y, B, a, 0.05), weno3_rhs(y, B_GENERIC, a, 0.05),
                               rtol=1e-13, atol=1e-12)
    np.testing.assert_allclose(weno3_jacobian(y, B, a, 0.05).bands,
                               weno3_jacobian(y, B_GENERIC, a, 0.05).bands,
                               rtol=1e-13, atol=1e-11)


def test_operator_is_conservative(rng):
    y = rng.uniform(-1, 1, 33)
    fh = interface_fluxes(y, B, split_bound(B, y))
    F = weno3_operator(y, B, split_bound(B, y), 0.1)
    assert 0.1 * F.sum() == pytest.approx(fh[-1] - fh[0], abs=1e-14)


def test_spatial_order_on_smooth_bump():
    errs = []
    for n in (600, 1200, 2400):
        g = Grid1D(-1.5, 1.5, n)
        u = oracle.smooth_bump(g.x)
        F = weno3_operator(u, B, split_bound(B, u), g.dx)
        errs.append(np.max(np.abs(F - u * oracle.smooth_bump_derivative(g.x))))
    rates = np.log2(np.array(errs[:-1]) / errs[1:])
    assert rates == pytest.approx([3.0, 3.0], abs=0.2)


def _linear_stencil(n, alpha, dx):
    # at y = 0 the weights are linear and their derivatives vanish
    P = np.zeros((n + 1, n + 4))  # interface i = j+1/2, padded column k = j + 2
    for i in range(n + 1):
        c = i + 1  # padded index of the cell left of the interface
        P[i, c - 1:c + 2] += 0.5 * alpha * np.array([-1 / 6, 5 / 6, 1 / 3])
        P[i, c:c + 3] += -0.5 * alpha * np.array([1 / 3, 5 / 6, -1 / 6])
    D = (P[1:] - P[:-1]) / dx
    return D[:, 2:-2]


@pytest.mark.parametrize("model", [B, B_GENERIC], ids=["fused", "generic"])
def test_jacobian_at_zero_is_linear_stencil(model):
    n, alpha, dx = 12, 0.8, 0.1
    J = weno3_jacobian(np.zeros(n), model, alpha, dx).todense()
    np.testing.assert_allclose(J, _linear_stencil(n, alpha, dx), rtol=0, atol=1e-13)


@pytest.mark.parametrize("model", [B, B_GENERIC], ids=["fused", "generic"])
def test_jacobian_against_dense_fd(rng, model):
    n, dx = 50, 0.04
    band = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) <= 2
    for _ in range(3):
        y = rng.uniform(-1, 1, n)
        a = split_bound(B, y)
        J = weno3_jacobian(y, model, a, dx).todense()
        fd = oracle.dense_fd_jacobian(lambda v: weno3_operator(v, model, a, dx), y, 1e-6)
        assert np.max(np.abs(J - fd) / (1 + np.abs(J))) <= 1e-6
        assert np.max(np.abs(fd[~band])) <= 1e-10


def test_jacobian_row_sums_match_constant_direction(rng):
    y = rng.uniform(-1, 1, 30)
    a = split_bound(B, y)
    J = weno3_jacobian(y, B, a, 0.1)
    ones = np.ones(30)
    h = 1e-6
    fd = (weno3_operator(y + h, B, a, 0.1) - weno3_operator(y - h, B, a, 0.1)) / (2 * h)
    np.testing.assert_allclose(J.matvec(ones), fd, rtol=1e-6, atol=1e-6)


def test_transpose_apply(rng):
    y = rng.uniform(-1, 1, 64)
    J = weno3_jacobian(y, B, split_bound(B, y), 1 / 32)
    v, w = rng.standard_normal((2, 64))
    lhs, rhs = np.dot(J.matvec(v), w), np.dot(v, jacobian_transpose_apply(J, w))
    assert abs(lhs - rhs) <= 1e-13 * max(abs(lhs), 1.0)
    assert not jacobian_transpose_apply(J, np.zeros(64)).any()
    D = J.todense()
    e = np.zeros(64)
    e[7] = 1.0
    np.testing.assert_allclose(J.rmatvec(e), D[7], rtol=0, atol=1e-15)
    np.testing.assert_allclose(J.matvec(e), D[:, 7], rtol=0, atol=1e-15)


def test_banded_shape_mismatch():
    J = BandedJacobian(np.zeros((5, 4)))
    with pytest.raises(ConfigurationError):
        J.matvec(np.zeros(5))
