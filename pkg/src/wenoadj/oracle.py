"""Reference solutions and brute-force verifiers.

Nothing in here calls the adjoint code: the finite-difference tangents only
use forward solves, and the analytic solutions are closed forms or
characteristic tracing.
"""

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from wenoadj.errors import ConfigurationError, OracleFailure
from wenoadj.timestepping import integrate

#: shock-funnel window of the stationary-shock case
FUNNEL = (-0.3, 0.3)


def smooth_bump(x):
    """``exp(-1/(1-x^2))`` on ``|x| < 1``, zero elsewhere."""
    x = np.asarray(x, dtype=np.float64)
    inside = np.abs(x) < 1.0
    xi = np.where(inside, x, 0.0)
    return np.where(inside, np.exp(-1.0 / (1.0 - xi * xi)), 0.0)


def smooth_bump_derivative(x):
    x = np.asarray(x, dtype=np.float64)
    inside = np.abs(x) < 1.0
    xi = np.where(inside, x, 0.0)
    q = 1.0 - xi * xi
    return np.where(inside, np.exp(-1.0 / q) * (-2.0 * xi / (q * q)), 0.0)


def characteristics_solution(u0, t, x, newton_tol=1e-14, du0=None, speed_bound=None,
                             max_iter=200):
    """Burgers solution ``y(t, x) = u0(x0)`` with ``x = x0 + u0(x0) t``.

    The foot ``x0`` is found by Newton's method safeguarded by bisection on
    ``[x - M t, x + M t]``, ``M = speed_bound``.  Valid only before
    characteristics cross; a non-monotone characteristic map raises.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if t == 0:
        return np.asarray(u0(x), dtype=np.float64)
    if du0 is None:
        def du0(s, _h=1e-7):
            return (u0(s + _h) - u0(s - _h)) / (2 * _h)
    if speed_bound is None:
        probe = np.linspace(x.min() - 10, x.max() + 10, 20001)
        speed_bound = float(np.max(np.abs(u0(probe)))) * 1.01 + 1e-300
    width = speed_bound * t
    lo, hi = x - width, x + width

    def g(s):
        return s + u0(s) * t - x

    if np.any(g(lo) > 0) or np.any(g(hi) < 0):
        raise OracleFailure("characteristic foot not bracketed; speed_bound too small")
    feet = np.linspace(lo.min(), hi.max(), 8193)
    if np.any(1.0 + du0(feet) * t <= 0):
        raise OracleFailure("characteristics have crossed at this time")
    x0 = x.copy()
    for _ in range(max_iter):
        r = g(x0)
        if np.all(np.abs(r) <= newton_tol):
            break
        neg = r < 0
        lo = np.where(neg, x0, lo)
        hi = np.where(neg, hi, x0)
        slope = 1.0 + du0(x0) * t
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = x0 - r / slope
        bad = ~np.isfinite(cand) | (cand <= lo) | (cand >= hi) | (slope <= 0)
        x0 = np.where(bad, 0.5 * (lo + hi), cand)
        x0 = np.where(np.abs(r) <= newton_tol, x0 - 0.0, x0)
    else:
        raise OracleFailure(
            f"Newton did not reach |residual| <= {newton_tol} (post-shock query?)")
    if np.any(1.0 + du0(x0) * t <= 0):
        raise OracleFailure("characteristics have crossed at this time")
    return np.asarray(u0(x0), dtype=np.float64)


def example1_initial(x):
    """``-sign(x)``: a stationary Burgers shock at the origin."""
    return -np.sign(np.asarray(x, dtype=np.float64))


def example1_reversible_solution(x):
    """Adjoint at ``t = 0`` of the stationary shock (``T = 0.5``): 1, 0 in the funnel, -1."""
    x = np.asarray(x, dtype=np.float64)
    return np.where(x < -0.5, 1.0, np.where(x > 0.5, -1.0, 0.0))


def target_43(x):
    """Discontinuous target: ramp ``2x - 1/2`` on ``[1/4, 3/4]``."""
    x = np.asarray(x, dtype=np.float64)
    return np.where((x >= 0.25) & (x <= 0.75), 2.0 * x - 0.5, 0.0)


def optimum_43(x):
    x = np.asarray(x, dtype=np.float64)
    return np.where((x >= 0.25) & (x <= 0.75), -2.0 * x + 1.5, 0.0)


def target_and_optimum_43():
    return target_43, optimum_43


def dense_fd_jacobian(rhs, state, h=1e-6):
    """Columnwise central differences of ``rhs`` at ``state``."""
    state = np.asarray(state, dtype=np.float64)
    n = state.shape[0]
    base = np.asarray(rhs(state))
    out = np.empty((base.shape[0], n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        out[:, k] = (np.asarray(rhs(state + e)) - np.asarray(rhs(state - e))) / (2 * h)
    return out


@dataclass
class RateTable:
    n: list
    errors: list
    rates: list  # rates[0] is None

    def rows(self):
        return list(zip(self.n, self.errors, self.rates))


def convergence_rates(errors) -> RateTable:
    """``rate = ln(E_N / E_2N) / ln 2`` along a mesh-doubling ladder."""
    errors = list(errors)
    ns = [int(n) for n, _ in errors]
    es = [float(e) for _, e in errors]
    if any(e <= 0 for e in es):
        raise ConfigurationError("errors must be positive")
    rates = [None]
    for (n0, e0), (n1, e1) in zip(zip(ns, es), zip(ns[1:], es[1:])):
        if n1 != 2 * n0:
            raise ConfigurationError(f"N={n1} does not double N={n0}")
        rates.append(math.log(e0 / e1) / math.log(2.0))
    return RateTable(ns, es, rates)


def funnel_error(x, p0, window=FUNNEL):
    """``max |p_exact - p0|`` over the shock funnel window."""
    x = np.asarray(x)
    sel = (x >= window[0]) & (x <= window[1])
    return float(np.max(np.abs(example1_reversible_solution(x[sel]) - np.asarray(p0)[sel])))


def _to_mp(v):
    return np.array([mpmath.mpf(float(a)) for a in np.asarray(v, dtype=np.float64)], dtype=object)


def tangent_pairing(disc, u0, du, pT, alpha, h=1e-12, dps=40, check=1e-14):
    """``<(dy^{nT}/du0) du, pT>`` by central differences in ``dps``-digit arithmetic.

    The forward solve is run on multiprecision object arrays, so the only
    error is the O(h^2) truncation.  Estimates at ``h`` and ``h/2`` must agree
    to ``check`` (relative); their Richardson extrapolation is returned.
    """
    with mpmath.workdps(dps):
        u = _to_mp(u0)
        d = _to_mp(du)
        w = _to_mp(pT)

        def phi(step):
            hm = mpmath.mpf(step)
            yp = integrate(u + hm * d, disc, alpha=alpha, record=False).final
            ym = integrate(u - hm * d, disc, alpha=alpha, record=False).final
            return np.dot(yp - ym, w) / (2 * hm)

        d1 = phi(h)
        d2 = phi(h / 2)
        scale = max(abs(d1), abs(d2), mpmath.mpf(1e-300))
        if abs(d1 - d2) > check * scale:
            raise OracleFailure(
                f"Richardson check failed: {float(d1)!r} vs {float(d2)!r}")
        return float((4 * d2 - d1) / 3)
