"""Semi-discrete WENO3 operator ``F`` and its exact banded Jacobian.

``F(y)_j = (fhat_{j+1/2} - fhat_{j-1/2}) / dx`` with the global
Lax-Friedrichs splitting; the ODE right-hand side is ``-F(y)``.
"""

from dataclasses import dataclass

import numpy as np

from wenoadj import _backend
from wenoadj.errors import ConfigurationError
from wenoadj.flux import EPS, FluxModel, split, split_derivative
from wenoadj.mesh import GHOST, padded_view


@dataclass(frozen=True)
class BandedJacobian:
    """``bands[d + 2, j] = dF_j / dy_{j+d}`` for ``d = -2..2``.

    Entries that would reference a ghost column are stored as zero.
    """

    bands: np.ndarray

    @property
    def n(self) -> int:
        return self.bands.shape[1]

    bandwidth = 2

    def matvec(self, v):
        return _backend.banded_matvec(self.bands, _vec(v, self.n))

    def rmatvec(self, p):
        return _backend.banded_rmatvec(self.bands, _vec(p, self.n))

    def todense(self) -> np.ndarray:
        n = self.n
        out = np.zeros((n, n), dtype=self.bands.dtype)
        for k in range(5):
            d = k - 2
            rows = np.arange(max(0, -d), min(n, n - d))
            out[rows, rows + d] = self.bands[k, rows]
        return out


def _vec(v, n):
    v = np.asarray(v)
    if v.shape != (n,):
        raise ConfigurationError(f"vector of shape {v.shape} does not match n={n}")
    return v


def _split_padded(state, model, alpha):
    y = padded_view(state, GHOST)
    hp, hm = split(model, alpha, y)
    return y, hp, hm


def interface_fluxes(state, model: FluxModel, alpha, eps=EPS):
    """``fhat_{j+1/2}`` for ``j = 0..N`` (the first and last touch ghosts)."""
    _, hp, hm = _split_padded(state, model, alpha)
    return _backend.weno3_fluxes(hp, hm, eps)


def weno3_operator(state, model: FluxModel, alpha, dx, eps=EPS):
    """``F_dx(y)``, the discrete ``d/dx f(y)``."""
    fh = interface_fluxes(state, model, alpha, eps)
    return (fh[1:] - fh[:-1]) / dx


def weno3_rhs(state, model: FluxModel, alpha, dx, eps=EPS):
    """ODE right-hand side ``-F_dx(y)``."""
    state = np.asarray(state)
    if state.dtype != object and not np.all(np.isfinite(state)):
        raise ConfigurationError("non-finite state passed to weno3_rhs")
    if model.name == "burgers":
        return _backend.burgers_weno3_rhs(state, alpha, eps, dx)
    return -weno3_operator(state, model, alpha, dx, eps)


def weno3_jacobian(state, model: FluxModel, alpha, dx, eps=EPS) -> BandedJacobian:
    """Exact Jacobian of ``F_dx`` (not of the right-hand side) at ``state``."""
    if model.name == "burgers":
        return BandedJacobian(_backend.burgers_weno3_jacobian(np.asarray(state), alpha, eps, dx))
    y, hp, hm = _split_padded(state, model, alpha)
    dhp, dhm = split_derivative(model, alpha, y)
    return BandedJacobian(_backend.weno3_flux_jacobian(hp, hm, dhp, dhm, eps, dx))


def jacobian_transpose_apply(jac: BandedJacobian, p):
    """``J^T p`` in O(N)."""
    return jac.rmatvec(p)
