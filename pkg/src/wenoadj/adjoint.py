"""Discrete adjoint sweeps over a recorded trajectory.

Each sweep is the exact transpose of the linearised forward step as it is
implemented in :mod:`wenoadj.timestepping`, so ``p^0`` is the exact
gradient of any function of ``y^{n_T}`` whose derivative is ``p^{n_T}``.
"""

from dataclasses import dataclass

import numpy as np

from wenoadj.errors import ConfigurationError, IntegrationError
from wenoadj.mesh import padded_view
from wenoadj.spatial import weno3_jacobian
from wenoadj.timestepping import Trajectory


@dataclass
class AdjointSweep:
    scheme: str
    p0: np.ndarray
    snapshots: np.ndarray = None


def terminal_data(y_final, target, mask=None):
    """``dG/dy = y - y_d`` for the quadratic tracking term, zero outside ``mask``."""
    y_final = np.asarray(y_final)
    target = np.asarray(target)
    if y_final.shape != target.shape:
        raise ConfigurationError(
            f"final state {y_final.shape} and target {target.shape} differ in length")
    p = y_final - target
    if mask is not None:
        p = np.where(np.asarray(mask, dtype=bool), p, 0 * p)
    return p


def _default_jac(traj):
    return lambda y: weno3_jacobian(y, traj.model, traj.alpha, traj.dx, traj.eps)


def _start(traj, pT, n_stages):
    if not traj.recorded:
        raise ConfigurationError("trajectory was integrated without stage recording")
    if traj.stages.ndim != 3 or traj.stages.shape[1] != n_stages:
        raise ConfigurationError(
            f"{traj.scheme} trajectory does not carry {n_stages} stages per step")
    p = np.asarray(pT)
    if p.shape != traj.final.shape:
        raise ConfigurationError("terminal data does not match the state length")
    return p.copy() if p.dtype == object else np.array(p, dtype=np.float64)


def _sweep(traj, pT, n_stages, step, snapshots):
    p = _start(traj, pT, n_stages)
    n_t = traj.n_steps
    snaps = np.empty((n_t + 1,) + p.shape, dtype=p.dtype) if snapshots else None
    if snapshots:
        snaps[n_t] = p
    for n in range(n_t - 1, -1, -1):
        p = step(traj.stages[n], p)
        if p.dtype != object and not np.all(np.isfinite(p)):
            raise IntegrationError("non-finite adjoint", step=n, time=n * traj.dt)
        if snapshots:
            snaps[n] = p
    return AdjointSweep(traj.scheme, p, snaps)


def adjoint_ssprk3_sweep(traj: Trajectory, pT, jac=None, snapshots=False) -> AdjointSweep:
    """Reverse pass through the Shu-Osher SSPRK3 steps.

    The last stage's Jacobian is applied first; stage states come from the
    trajectory, never recomputed.
    """
    jac = jac or _default_jac(traj)
    dt = traj.dt

    def step(st, p):
        y0, y1, y2 = st
        q2 = (2.0 / 3.0) * (p - dt * jac(y2).rmatvec(p))
        q1 = 0.25 * (q2 - dt * jac(y1).rmatvec(q2))
        return p / 3.0 + 0.75 * q2 + q1 - dt * jac(y0).rmatvec(q1)

    return _sweep(traj, pT, 3, step, snapshots)


def adjoint_erk4_sweep(traj: Trajectory, pT, jac=None, snapshots=False) -> AdjointSweep:
    """Reverse pass through classical RK4 steps (right-hand side ``-F``)."""
    jac = jac or _default_jac(traj)
    dt = traj.dt

    def step(st, p):
        Y1, Y2, Y3, Y4 = st
        # adjoints of k1..k4, then of the stage states; dR/dy = -J
        l4 = (dt / 6.0) * p
        g4 = -jac(Y4).rmatvec(l4)
        l3 = (dt / 3.0) * p + dt * g4
        g3 = -jac(Y3).rmatvec(l3)
        l2 = (dt / 3.0) * p + 0.5 * dt * g3
        g2 = -jac(Y2).rmatvec(l2)
        l1 = (dt / 6.0) * p + 0.5 * dt * g2
        g1 = -jac(Y1).rmatvec(l1)
        return p + g1 + g2 + g3 + g4

    return _sweep(traj, pT, 4, step, snapshots)


def lf_coefficients(y, lam, gamma, model):
    """``(c_left, c_mid, c_right)`` of the adjoint LF step, ``lam = dt/dx``."""
    s = 0.5 * lam * model.df(y)
    return 0.5 * gamma - s, (1.0 - gamma) + 0 * s, 0.5 * gamma + s


def eo_coefficients(y, lam, model):
    d = model.df(y)
    a = abs(d)
    return 0.5 * lam * (a - d), 1.0 - lam * a, 0.5 * lam * (a + d)


def _three_point(c, p):
    pp = padded_view(p, 1)
    cl, cm, cr = c
    return cl * pp[:-2] + cm * pp[1:-1] + cr * pp[2:]


def adjoint_lf_sweep(traj: Trajectory, pT, gamma, model=None, snapshots=False) -> AdjointSweep:
    """``p_j^n = c_{j-1} p_{j-1}^{n+1} + c_j p_j^{n+1} + c_{j+1} p_{j+1}^{n+1}``.

    The coefficients use ``f'`` at ``y_j^n``, the state the forward step
    started from, which makes the sweep the exact transpose.
    """
    if traj.scheme != "lf":
        raise ConfigurationError(f"expected an lf trajectory, got {traj.scheme}")
    if traj.gamma is not None and abs(traj.gamma - gamma) > 1e-15:
        raise ConfigurationError(f"gamma={gamma} differs from the forward gamma={traj.gamma}")
    model = model or traj.model
    lam = traj.dt / traj.dx
    return _sweep(traj, pT, 1,
                  lambda st, p: _three_point(lf_coefficients(st[0], lam, gamma, model), p),
                  snapshots)


def adjoint_eo_sweep(traj: Trajectory, pT, model=None, snapshots=False) -> AdjointSweep:
    if traj.scheme != "eo":
        raise ConfigurationError(f"expected an eo trajectory, got {traj.scheme}")
    model = model or traj.model
    lam = traj.dt / traj.dx
    return _sweep(traj, pT, 1,
                  lambda st, p: _three_point(eo_coefficients(st[0], lam, model), p),
                  snapshots)


def adjoint_sweep(traj: Trajectory, pT, snapshots=False) -> AdjointSweep:
    """Dispatch on the trajectory's scheme."""
    if traj.scheme == "weno3-ssprk3":
        return adjoint_ssprk3_sweep(traj, pT, snapshots=snapshots)
    if traj.scheme == "weno3-erk4":
        return adjoint_erk4_sweep(traj, pT, snapshots=snapshots)
    if traj.scheme == "lf":
        return adjoint_lf_sweep(traj, pT, traj.gamma, snapshots=snapshots)
    if traj.scheme == "eo":
        return adjoint_eo_sweep(traj, pT, snapshots=snapshots)
    raise ConfigurationError(f"unknown scheme {traj.scheme!r}")
