"""Seeded self-checks behind ``wenoadj verify``.

Each suite returns a :class:`Check`.  The adjoint is looked up on the
module at call time so a test double can be swapped in.
"""

from dataclasses import dataclass

import numpy as np

from wenoadj import adjoint, control, oracle
from wenoadj.flux import (GAMMA_FAR, GAMMA_NEAR, burgers, eo_flux, lf_flux,
                          split, split_bound, weno3_flux_minus, weno3_flux_plus,
                          weno3_weights)
from wenoadj.mesh import Grid1D
from wenoadj.spatial import weno3_jacobian, weno3_operator
from wenoadj.timestepping import SCHEMES, Discretization, TimeGrid, integrate

TRANSPOSE_TOL = 1e-11
JACOBIAN_TOL = 1e-6
OFFBAND_TOL = 1e-10
MASS_TOL = 1e-12
GRADIENT_TOL = 1e-4


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    value: float = float("nan")


def small_disc(scheme, n=64, n_steps=16, ratio=0.25):
    grid = Grid1D(-1.0, 1.0, n)
    time = TimeGrid(n_steps * ratio * grid.dx, n_steps, grid.dx)
    return Discretization(grid, time, scheme)


def dot_product_gap(scheme, seed=0, n=64, n_steps=16):
    """Relative gap ``|<T du, pT> - <du, p0>| / |<du, p0>|`` on a random instance."""
    rng = np.random.default_rng(seed)
    disc = small_disc(scheme, n, n_steps)
    u0 = rng.uniform(-1.0, 1.0, n)
    du = rng.standard_normal(n)
    pT = rng.standard_normal(n)
    alpha = split_bound(disc.model, u0)
    traj = integrate(u0, disc, alpha=alpha)
    p0 = adjoint.adjoint_sweep(traj, pT).p0
    rhs = float(np.dot(du, p0))
    lhs = oracle.tangent_pairing(disc, u0, du, pT, alpha)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def suite_transpose(seed=0, instances=1):
    worst, where = 0.0, ""
    for scheme in SCHEMES:
        for k in range(instances):
            gap = dot_product_gap(scheme, seed + k)
            if not gap <= worst:
                worst, where = gap, scheme
    return Check("transpose", worst <= TRANSPOSE_TOL,
                 f"max relative dot-product gap {worst:.3e} ({where}), tol {TRANSPOSE_TOL:g}", worst)


def jacobian_errors(seed=0, states=20, n=50, h=1e-6):
    """(max entrywise relative error, max off-band |FD|) over random states."""
    rng = np.random.default_rng(seed)
    model = burgers()
    dx = 2.0 / n
    rel, offband = 0.0, 0.0
    band = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) <= 2
    for _ in range(states):
        y = rng.uniform(-1.0, 1.0, n)
        alpha = split_bound(model, y)
        J = weno3_jacobian(y, model, alpha, dx).todense()
        fd = oracle.dense_fd_jacobian(lambda v: weno3_operator(v, model, alpha, dx), y, h)
        rel = max(rel, float(np.max(np.abs(J - fd) / (1.0 + np.abs(J)))))
        offband = max(offband, float(np.max(np.abs(fd[~band]))))
    return rel, offband


def suite_jacobian(seed=0):
    rel, off = jacobian_errors(seed)
    ok = rel <= JACOBIAN_TOL and off <= OFFBAND_TOL
    return Check("jacobian", ok, f"max rel error {rel:.3e} (tol {JACOBIAN_TOL:g}), "
                 f"off-band {off:.1e} (tol {OFFBAND_TOL:g})", rel)


def mass_drift(scheme, seed=0, n=128, n_steps=40):
    """Worst per-step ``|sum y^{n+1} - sum y^n| / sum |y^n|`` for compact data."""
    rng = np.random.default_rng(seed)
    disc = small_disc(scheme, n, n_steps)
    x = disc.grid.x
    u0 = np.where(np.abs(x) < 0.5, rng.uniform(-1.0, 1.0, n), 0.0)
    states = integrate(u0, disc).states()
    sums = states.sum(axis=1)
    scale = np.abs(states[:-1]).sum(axis=1)
    return float(np.max(np.abs(np.diff(sums)) / scale))


def suite_conservation(seed=0):
    worst = max(mass_drift(s, seed) for s in SCHEMES)
    return Check("conservation", worst <= MASS_TOL,
                 f"worst per-step relative mass change {worst:.2e}, tol {MASS_TOL:g}", worst)


def weight_extremes(seed=0, count=10**6):
    rng = np.random.default_rng(seed)
    h = rng.uniform(-2.0, 2.0, (3, count)) * rng.choice([1e-4, 1e-2, 1.0], (3, count))
    worst, min_w = 0.0, 1.0
    for g1, g2 in ((GAMMA_FAR, GAMMA_NEAR), (GAMMA_NEAR, GAMMA_FAR)):
        w = weno3_weights(h[0], h[1], h[2], g1, g2)
        worst = max(worst, float(np.max(np.abs(w.w1 + w.w2 - 1.0))))
        min_w = min(min_w, float(np.min(w.w1)), float(np.min(w.w2)))
    return worst, min_w


def suite_weights(seed=0):
    worst, min_w = weight_extremes(seed)
    return Check("weights", worst <= 1e-14 and min_w > 0,
                 f"max |w1+w2-1| = {worst:.1e}, min weight {min_w:.2e} over 1e6 stencils", worst)


def consistency_error():
    model = burgers()
    u = np.linspace(-2.0, 2.0, 401)
    fu = model.f(u)
    alpha = 2.0
    fp, fm = split(model, alpha, u)
    weno = weno3_flux_plus(fp, fp, fp) + weno3_flux_minus(fm, fm, fm)
    errs = [weno - fu, lf_flux(u, u, 0.5, 0.01, 0.0025, model) - fu, eo_flux(u, u, model) - fu]
    return float(max(np.max(np.abs(e)) for e in errs))


def suite_consistency():
    err = consistency_error()
    return Check("consistency", err <= 1e-14, f"max |fhat(u,..,u) - f(u)| = {err:.1e}", err)


def coefficient_extremes(ratio=0.25, gamma=0.5):
    """(min coefficient, max |sum - 1|) of the LF/EO adjoint steps under CFL."""
    model = burgers()
    smax = gamma / ratio
    y = np.linspace(-smax, smax, 2001)
    lo, dev = np.inf, 0.0
    for c in (adjoint.lf_coefficients(y, ratio, gamma, model),
              adjoint.eo_coefficients(y, ratio, model)):
        lo = min(lo, float(min(np.min(ci) for ci in c)))
        dev = max(dev, float(np.max(np.abs(c[0] + c[1] + c[2] - 1.0))))
    return lo, dev


def suite_convexity():
    lo, dev = coefficient_extremes()
    return Check("convexity", lo >= -1e-15 and dev <= 1e-14,
                 f"min coefficient {lo:.2e}, max |sum-1| {dev:.1e}", dev)


def gradient_gaps(scheme, seed=0, directions=10, h=1e-5, n=64, n_steps=16):
    """Relative gaps between FD directional derivatives of J and ``dx <p0, du>``."""
    rng = np.random.default_rng(seed)
    disc = small_disc(scheme, n, n_steps)
    x = disc.grid.x
    u0 = 0.8 * np.exp(-8.0 * x * x) - 0.3 * np.exp(-20.0 * (x - 0.4) ** 2)
    target = 0.3 * np.sin(np.pi * x)
    problem = control.ControlProblem(disc, target, interval=(-0.75, 0.75))
    alpha = split_bound(disc.model, u0)
    p0, J, _ = control.gradient(problem, u0, alpha=alpha)
    gaps = []
    for _ in range(directions):
        du = rng.standard_normal(n)
        jp = control.gradient(problem, u0 + h * du, alpha=alpha)[1]
        jm = control.gradient(problem, u0 - h * du, alpha=alpha)[1]
        fd = (jp - jm) / (2 * h)
        ad = disc.grid.dx * float(np.dot(p0, du))
        gaps.append(abs(fd - ad) / max(abs(ad), 1e-12))
    return gaps


def suite_gradient(seed=0):
    worst, where = 0.0, ""
    for scheme in SCHEMES:
        g = max(gradient_gaps(scheme, seed))
        if not g <= worst:
            worst, where = g, scheme
    return Check("gradient", worst <= GRADIENT_TOL,
                 f"max relative gap {worst:.2e} ({where}), tol {GRADIENT_TOL:g}", worst)


SUITES = {
    "transpose": suite_transpose,
    "jacobian": suite_jacobian,
    "conservation": suite_conservation,
    "weights": suite_weights,
    "consistency": lambda seed=0: suite_consistency(),
    "convexity": lambda seed=0: suite_convexity(),
    "gradient": suite_gradient,
}


def run(seed=0, names=None):
    names = list(SUITES) if not names else names
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s) {unknown}; available: {', '.join(SUITES)}")
    return [SUITES[n](seed=seed) for n in names]
