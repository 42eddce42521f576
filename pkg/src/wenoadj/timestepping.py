"""Explicit time integration with full stage recording for adjoint replay.

Four fully discrete schemes are available:

* ``weno3-ssprk3``: WENO3 in space, three-stage SSP Runge-Kutta (Shu-Osher form)
* ``weno3-erk4``: WENO3 in space, classical four-stage Runge-Kutta
* ``lf``: first-order modified Lax-Friedrichs
* ``eo``: first-order Engquist-Osher
"""

from dataclasses import dataclass, field

import numpy as np

from wenoadj import _backend
from wenoadj.errors import ConfigurationError, IntegrationError
from wenoadj.flux import EPS, FluxModel, burgers, eo_flux, lf_flux, split_bound
from wenoadj.mesh import Grid1D, check_state, padded_view
from wenoadj.spatial import weno3_rhs

SCHEMES = ("weno3-ssprk3", "weno3-erk4", "lf", "eo")
N_STAGES = {"weno3-ssprk3": 3, "weno3-erk4": 4, "lf": 1, "eo": 1}

# Shu-Osher rows: (coef of y0, coef of previous stage, coef of dt*rhs(previous stage))
SSPRK3_TABLEAU = ((0.0, 1.0, 1.0), (0.75, 0.25, 0.25), (1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0))


@dataclass(frozen=True)
class TimeGrid:
    t_final: float
    n_steps: int
    dx: float

    def __post_init__(self):
        if self.t_final < 0 or self.n_steps < 0 or int(self.n_steps) != self.n_steps:
            raise ConfigurationError("need t_final >= 0 and an integer n_steps >= 0")
        if self.n_steps == 0 and self.t_final > 0:
            raise ConfigurationError("n_steps = 0 requires t_final = 0")

    @property
    def dt(self) -> float:
        return self.t_final / self.n_steps if self.n_steps else 0.0

    @property
    def cfl_ratio(self) -> float:
        return self.dt / self.dx

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    @classmethod
    def from_ratio(cls, t_final, dx, ratio):
        """``dt ~ ratio * dx``, rounded so that ``n_steps * dt = t_final``."""
        if ratio <= 0 or dx <= 0:
            raise ConfigurationError("cfl ratio and dx must be positive")
        n = int(round(t_final / (ratio * dx)))
        if t_final > 0:
            n = max(n, 1)
        return cls(float(t_final), n, float(dx))


@dataclass(frozen=True)
class Discretization:
    """Everything a forward solve needs apart from the initial data."""

    grid: Grid1D
    time: TimeGrid
    scheme: str = "weno3-ssprk3"
    model: FluxModel = field(default_factory=burgers)
    eps: float = EPS
    gamma: float = 0.5
    cfl_bound: float = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigurationError(
                f"unknown scheme {self.scheme!r}; choose one of {', '.join(SCHEMES)}")
        if not self.eps > 0:
            raise ConfigurationError("eps must be positive")
        if self.scheme == "lf" and not 0 < self.gamma <= 1:
            raise ConfigurationError("gamma must lie in (0, 1]")
        if abs(self.time.dx - self.grid.dx) > 1e-12 * self.grid.dx:
            raise ConfigurationError("time grid was built for a different dx")
        if self.cfl_bound is not None and self.time.cfl_ratio > self.cfl_bound * (1 + 1e-12):
            raise ConfigurationError(
                f"dt/dx = {self.time.cfl_ratio:.4g} exceeds the configured bound {self.cfl_bound}")

    def rhs(self, alpha):
        """The WENO3 right-hand side ``y -> -F(y)`` with the splitting frozen."""
        model, dx, eps = self.model, self.grid.dx, self.eps
        return lambda y: weno3_rhs(y, model, alpha, dx, eps)


@dataclass
class Trajectory:
    """Stage states of every step plus the final state.

    ``stages[n, s]`` is stage ``s`` of step ``n`` (for LF/EO the only stage
    is ``y^n`` itself).  Empty when recording was switched off.
    """

    scheme: str
    stages: np.ndarray
    final: np.ndarray
    initial: np.ndarray
    alpha: float
    dt: float
    dx: float
    gamma: float = None
    eps: float = EPS
    model: FluxModel = field(default_factory=burgers)
    mass: np.ndarray = None
    recorded: bool = True

    @property
    def n_steps(self) -> int:
        return self.stages.shape[0]

    def states(self) -> np.ndarray:
        """``y^0, ..., y^{n_T}`` (needs recorded stages)."""
        return np.concatenate([self.stages[:, 0], self.final[None]], axis=0)


def _finite(y, step, dt):
    if y.dtype != object and not np.all(np.isfinite(y)):
        raise IntegrationError("non-finite state", step=step, time=step * dt)


def ssprk3_step(y, dt, rhs):
    """One SSPRK3 step; returns the new state and the three stage states."""
    y0 = y
    y1 = y0 + dt * rhs(y0)
    y2 = 0.75 * y0 + 0.25 * y1 + 0.25 * dt * rhs(y1)
    y3 = y0 / 3.0 + (2.0 / 3.0) * y2 + (2.0 / 3.0) * dt * rhs(y2)
    return y3, (y0, y1, y2)


def erk4_step(y, dt, rhs):
    """Classical RK4 on an autonomous system; stages are the stage states."""
    Y1 = y
    k1 = rhs(Y1)
    Y2 = y + 0.5 * dt * k1
    k2 = rhs(Y2)
    Y3 = y + 0.5 * dt * k2
    k3 = rhs(Y3)
    Y4 = y + dt * k3
    k4 = rhs(Y4)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), (Y1, Y2, Y3, Y4)


def _max_speed(model, y):
    return float(np.max(np.abs(np.asarray(model.df(y), dtype=np.float64)))) if len(y) else 0.0


def _check_cfl(dt, dx, bound, model, y, name):
    speed = _max_speed(model, y)
    if speed > 0 and dt > bound * dx / speed * (1 + 1e-12):
        raise ConfigurationError(
            f"{name}: CFL violated, dt={dt:.4g} > {bound}*dx/max|f'| = {bound * dx / speed:.4g}")


def lf_step(y, dt, gamma, model: FluxModel, grid: Grid1D, check=True):
    dx = grid.dx
    if check:
        _check_cfl(dt, dx, gamma, model, y, "lf_step")
    yp = padded_view(y, 1)
    fh = lf_flux(yp[:-1], yp[1:], gamma, dx, dt, model)
    return y - (dt / dx) * (fh[1:] - fh[:-1])


def eo_step(y, dt, model: FluxModel, grid: Grid1D, check=True, cfl=0.5):
    dx = grid.dx
    if check:
        _check_cfl(dt, dx, cfl, model, y, "eo_step")
    yp = padded_view(y, 1)
    fh = eo_flux(yp[:-1], yp[1:], model)
    return y - (dt / dx) * (fh[1:] - fh[:-1])


def integrate(u0, disc: Discretization, alpha=None, record=True, track_mass=False):
    """Run ``disc.time.n_steps`` steps from ``u0``.

    ``alpha`` is the splitting bound for WENO3; by default ``max |f'|`` over
    the range of ``u0``, held fixed for the whole horizon.
    """
    y = check_state(u0, disc.grid)
    if y.dtype != object:
        y = np.asarray(y, dtype=np.float64)
    if alpha is None:
        alpha = split_bound(disc.model, np.asarray(y, dtype=np.float64))
    n_t, dt, dx = disc.time.n_steps, disc.time.dt, disc.grid.dx
    s = N_STAGES[disc.scheme]
    stages = np.empty((n_t if record else 0, s, y.shape[0]), dtype=y.dtype)
    mass = np.empty(n_t + 1) if track_mass else None
    if track_mass:
        mass[0] = dx * float(np.sum(y))
    initial = y

    if disc.scheme == "lf":
        _check_cfl(dt, dx, disc.gamma, disc.model, y, "lf")
    elif disc.scheme == "eo":
        _check_cfl(dt, dx, 0.5, disc.model, y, "eo")
    fused = _backend.fused_integrator()
    if (fused is not None and disc.scheme.startswith("weno3") and disc.model.name == "burgers"
            and y.dtype == np.float64 and not track_mass):
        final, stages, failed = fused(y, float(alpha), float(disc.eps), float(dx), float(dt),
                                      n_t, disc.scheme, bool(record))
        if final is None:
            raise IntegrationError("non-finite state", step=failed, time=failed * dt)
        return Trajectory(disc.scheme, stages, final, initial, float(alpha), dt, dx,
                          None, disc.eps, disc.model, None, record)

    rhs = disc.rhs(alpha)
    for n in range(n_t):
        if disc.scheme.startswith("weno3"):
            step = ssprk3_step if disc.scheme == "weno3-ssprk3" else erk4_step
            try:
                with np.errstate(over="ignore", invalid="ignore"):
                    y_next, st = step(y, dt, rhs)
            except ConfigurationError:  # a stage went non-finite
                raise IntegrationError("non-finite stage state", step=n, time=n * dt) from None
        elif disc.scheme == "lf":
            # CFL was checked on u0; the schemes obey a discrete maximum principle
            y_next, st = lf_step(y, dt, disc.gamma, disc.model, disc.grid, check=False), (y,)
        else:
            y_next, st = eo_step(y, dt, disc.model, disc.grid, check=False), (y,)
        _finite(y_next, n, dt)
        if record:
            for k, v in enumerate(st):
                stages[n, k] = v
        y = y_next
        if track_mass:
            mass[n + 1] = dx * float(np.sum(y))

    return Trajectory(disc.scheme, stages, y, initial, float(alpha), dt, dx,
                      disc.gamma if disc.scheme == "lf" else None, disc.eps, disc.model, mass, record)
