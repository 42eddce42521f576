"""Flux models, the global Lax-Friedrichs splitting and the numerical fluxes.

Every function here is written with array arithmetic only, so it accepts
scalars, float arrays and object arrays (multiprecision oracles) alike.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

#: default WENO regulariser
EPS = 1e-6

# linear weights: the substencil reaching away from the upwind cell gets 1/3
GAMMA_FAR = 1.0 / 3.0
GAMMA_NEAR = 2.0 / 3.0


@dataclass(frozen=True)
class FluxModel:
    """Convex scalar flux ``f`` with its derivative and Engquist-Osher parts.

    ``eo_plus(u)`` and ``eo_minus(u)`` are the integrals of ``max(0, f')``
    and ``min(0, f')`` from 0 to ``u``.
    """

    name: str
    f: Callable
    df: Callable
    eo_plus: Callable
    eo_minus: Callable
    f_zero: float = 0.0


def _burgers_f(u):
    return 0.5 * u * u


def _burgers_df(u):
    return 1.0 * u


def _burgers_eo_plus(u):
    up = np.maximum(u, 0 * u)
    return 0.5 * up * up


def _burgers_eo_minus(u):
    um = np.minimum(u, 0 * u)
    return 0.5 * um * um


def burgers() -> FluxModel:
    """``f(u) = u^2 / 2``."""
    return FluxModel("burgers", _burgers_f, _burgers_df,
                     _burgers_eo_plus, _burgers_eo_minus, 0.0)


def split_bound(model: FluxModel, u) -> float:
    """``max |f'|`` over ``[min u, max u]``.

    For a convex flux ``f'`` is monotone, so the endpoints suffice.
    """
    u = np.asarray(u, dtype=np.float64)
    lo, hi = float(np.min(u)), float(np.max(u))
    return float(max(abs(model.df(lo)), abs(model.df(hi))))


def split(model: FluxModel, alpha, u):
    """Lax-Friedrichs splitting ``f+-(u) = (f(u) +- alpha u) / 2``."""
    fu = model.f(u)
    return 0.5 * (fu + alpha * u), 0.5 * (fu - alpha * u)


def split_derivative(model: FluxModel, alpha, u):
    dfu = model.df(u)
    return 0.5 * (dfu + alpha), 0.5 * (dfu - alpha)


@dataclass(frozen=True)
class WenoWeights:
    w1: float
    w2: float
    beta1: float
    beta2: float
    eps: float
    gamma1: float
    gamma2: float


def weno3_weights(h_left, h_mid, h_right, gamma1, gamma2, eps=EPS) -> WenoWeights:
    """Nonlinear weights of the two WENO3 substencils.

    ``beta1`` measures the left pair ``(h_left, h_mid)`` and ``beta2`` the
    right pair ``(h_mid, h_right)``.
    """
    beta1 = (h_mid - h_left) ** 2
    beta2 = (h_right - h_mid) ** 2
    a1 = gamma1 / (eps + beta1) ** 2
    a2 = gamma2 / (eps + beta2) ** 2
    s = a1 + a2
    return WenoWeights(a1 / s, a2 / s, beta1, beta2, eps, gamma1, gamma2)


def weno3_flux_plus(fp_jm1, fp_j, fp_jp1, eps=EPS):
    """Upwind-left reconstruction of ``f+`` at ``x_{j+1/2}``."""
    w = weno3_weights(fp_jm1, fp_j, fp_jp1, GAMMA_FAR, GAMMA_NEAR, eps)
    return (w.w1 * (-0.5 * fp_jm1 + 1.5 * fp_j)
            + w.w2 * (0.5 * fp_j + 0.5 * fp_jp1))


def weno3_flux_minus(fm_jm1, fm_j, fm_jp1, eps=EPS):
    """Upwind-right reconstruction of ``f-`` at ``x_{j-1/2}``."""
    w = weno3_weights(fm_jm1, fm_j, fm_jp1, GAMMA_NEAR, GAMMA_FAR, eps)
    return (w.w2 * (-0.5 * fm_jp1 + 1.5 * fm_j)
            + w.w1 * (0.5 * fm_j + 0.5 * fm_jm1))


def lf_flux(a, b, gamma, dx, dt, model: FluxModel):
    """Modified Lax-Friedrichs flux; ``gamma = 1`` is the classical one."""
    return 0.5 * (model.f(b) + model.f(a)) - 0.5 * gamma * (dx / dt) * (b - a)


def eo_flux(a, b, model: FluxModel):
    return model.f_zero + model.eo_plus(a) + model.eo_minus(b)
