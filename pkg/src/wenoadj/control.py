"""Tracking-type optimal control of the initial data.

``J(u0) = 1/2 * integral_I (y(T, x; u0) - y_d(x))^2 dx`` (midpoint rule),
minimised by steepest descent on the discrete adjoint ``p^0`` with Armijo
backtracking.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from wenoadj.adjoint import adjoint_sweep, terminal_data
from wenoadj.errors import ConfigurationError, DescentStall, IntegrationError
from wenoadj.mesh import check_state, reverse
from wenoadj.timestepping import Discretization, integrate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ControlProblem:
    disc: Discretization
    target: np.ndarray
    interval: tuple = None
    tol: float = 1e-7
    max_iterations: int = 50
    shrink: float = 0.95
    initial_step: float = 1.0
    max_backtracks: int = 500

    def __post_init__(self):
        grid = self.disc.grid
        object.__setattr__(self, "target", check_state(np.asarray(self.target, dtype=float), grid))
        if self.interval is None:
            object.__setattr__(self, "interval", (grid.a, grid.b))
        lo, hi = self.interval
        if not (grid.a <= lo < hi <= grid.b):
            raise ConfigurationError(f"tracking interval {self.interval} not inside [{grid.a}, {grid.b}]")
        if not self.tol > 0:
            raise ConfigurationError("tol must be positive")
        if not 0 < self.shrink < 1:
            raise ConfigurationError("shrink factor must lie in (0, 1)")
        if self.initial_step <= 0 or self.max_iterations < 0 or self.max_backtracks < 1:
            raise ConfigurationError("invalid descent limits")
        if not np.any(self.mask):
            raise ConfigurationError("tracking interval contains no cell centre")

    @property
    def mask(self) -> np.ndarray:
        x = self.disc.grid.x
        lo, hi = self.interval
        return (x >= lo) & (x <= hi)

    @property
    def dx(self) -> float:
        return self.disc.grid.dx


@dataclass
class DescentReport:
    J: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    backtracks: list = field(default_factory=list)
    control: np.ndarray = None
    state: np.ndarray = None
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.steps)


def objective(y_final, target, mask, dx) -> float:
    mask = np.asarray(mask, dtype=bool)
    if not np.any(mask):
        raise ConfigurationError("empty tracking interval")
    r = (np.asarray(y_final) - np.asarray(target))[mask]
    return float(0.5 * dx * np.sum(r * r))


def l2_norm_sq(v, mask, dx) -> float:
    v = np.asarray(v)[np.asarray(mask, dtype=bool)]
    return float(dx * np.sum(v * v))


def _evaluate(problem, u0, alpha=None):
    traj = integrate(u0, problem.disc, alpha=alpha)
    J = objective(traj.final, problem.target, problem.mask, problem.dx)
    return traj, J


def _adjoint(problem, traj):
    pT = terminal_data(traj.final, problem.target, problem.mask)
    return adjoint_sweep(traj, pT).p0


def gradient(problem: ControlProblem, u0, alpha=None):
    """``(p0, J, y_final)``; ``dJ(u0)[du] = dx * <p0, du>`` for frozen ``alpha``."""
    traj, J = _evaluate(problem, u0, alpha)
    return _adjoint(problem, traj), J, traj.final


def initial_guess(problem: ControlProblem) -> np.ndarray:
    """Solve forward from ``y_d(-x)`` and reflect the result back."""
    if not problem.disc.grid.is_symmetric:
        raise ConfigurationError("initial guess by reflection needs a grid symmetric about 0")
    z = integrate(reverse(problem.target), problem.disc, record=False).final
    return reverse(z)


def armijo_descent(problem: ControlProblem, u0_init) -> DescentReport:
    """Steepest descent ``u <- u - a p0`` with Armijo backtracking.

    ``a`` restarts at ``initial_step`` every iteration and is multiplied by
    ``shrink`` until ``J_new <= J - a/2 * ||p0||^2_{L2(I)}``.
    """
    u = np.array(check_state(u0_init, problem.disc.grid), dtype=np.float64)
    mask, dx = problem.mask, problem.dx
    traj, J = _evaluate(problem, u)
    p0 = _adjoint(problem, traj)
    g2 = l2_norm_sq(p0, mask, dx)
    report = DescentReport(J=[J], grad_norms=[np.sqrt(g2)], control=u, state=traj.final)

    for it in range(problem.max_iterations):
        if g2 == 0.0:
            report.converged = True
            break
        a = problem.initial_step
        for back in range(problem.max_backtracks):
            trial = u - a * p0
            try:
                t_traj, t_J = _evaluate(problem, trial)
            except (ConfigurationError, IntegrationError):
                # trial violated the CFL bound or blew up: treat as rejected
                t_traj, t_J = None, np.inf
            if t_J <= J - 0.5 * a * g2:
                break
            a *= problem.shrink
        else:
            raise DescentStall(
                f"no Armijo step after {problem.max_backtracks} backtracks (iteration {it})",
                report)
        u, traj, J_old, J = trial, t_traj, J, t_J
        p0 = _adjoint(problem, traj)
        g2 = l2_norm_sq(p0, mask, dx)
        report.J.append(J)
        report.steps.append(a)
        report.backtracks.append(back)
        report.grad_norms.append(np.sqrt(g2))
        report.control, report.state = u, traj.final
        log.debug("iter %d: J=%.6e step=%.4g backtracks=%d", it + 1, J, a, back)
        if abs(J - J_old) <= problem.tol:
            report.converged = True
            break
    return report
