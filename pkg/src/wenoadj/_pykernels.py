"""Pure numpy kernels (fallback backend).

Same signatures as the compiled ``_ckernels`` module.  These never force a
float dtype, so object arrays of multiprecision numbers work too; the
oracles rely on that.

Conventions: ``hp``/``hm`` are the split fluxes ``f+``/``f-`` sampled on the
zero-padded state (length ``N + 4``); ``dhp``/``dhm`` their derivatives.
Interface ``i = 0..N`` sits between padded cells ``i + 1`` and ``i + 2``.
"""

import numpy as np

BACKEND = "python"

_G_FAR = 1.0 / 3.0
_G_NEAR = 2.0 / 3.0


def _upwind(far, c, near, eps):
    bf = (c - far) ** 2
    bn = (near - c) ** 2
    af = _G_FAR / (eps + bf) ** 2
    an = _G_NEAR / (eps + bn) ** 2
    w = af / (af + an)
    d = -0.5 * far + c - 0.5 * near
    return 0.5 * (c + near) + w * d


def _upwind_grad(far, c, near, eps):
    bf = (c - far) ** 2
    bn = (near - c) ** 2
    af = _G_FAR / (eps + bf) ** 2
    an = _G_NEAR / (eps + bn) ** 2
    w = af / (af + an)
    d = -0.5 * far + c - 0.5 * near
    ww = 4.0 * w * (1.0 - w)
    A = ww * (c - far) / (eps + bf)
    B = ww * (near - c) / (eps + bn)
    return -0.5 * w + d * A, 0.5 + w - d * (A + B), 0.5 - 0.5 * w + d * B


def weno3_fluxes(hp, hm, eps):
    """Numerical fluxes at the ``N + 1`` interfaces."""
    n = hp.shape[0] - 4
    plus = _upwind(hp[0:n + 1], hp[1:n + 2], hp[2:n + 3], eps)
    minus = _upwind(hm[3:n + 4], hm[2:n + 3], hm[1:n + 2], eps)
    return plus + minus


def weno3_flux_jacobian(hp, hm, dhp, dhm, eps, dx):
    """Five bands of ``dF/dy``: ``bands[d + 2, r] = dF_r / dy_{r+d}``."""
    n = hp.shape[0] - 4
    pf, pc, pn = _upwind_grad(hp[0:n + 1], hp[1:n + 2], hp[2:n + 3], eps)
    mf, mc, mn = _upwind_grad(hm[3:n + 4], hm[2:n + 3], hm[1:n + 2], eps)
    # derivative of interface flux i w.r.t. padded cells i, i+1, i+2, i+3
    d0 = pf * dhp[0:n + 1]
    d1 = pc * dhp[1:n + 2] + mn * dhm[1:n + 2]
    d2 = pn * dhp[2:n + 3] + mc * dhm[2:n + 3]
    d3 = mf * dhm[3:n + 4]
    bands = np.empty((5, n), dtype=np.result_type(d0, d1))
    bands[0] = -d0[:n]
    bands[1] = d0[1:] - d1[:n]
    bands[2] = d1[1:] - d2[:n]
    bands[3] = d2[1:] - d3[:n]
    bands[4] = d3[1:]
    bands /= dx
    # columns outside 0..n-1 are ghosts, not unknowns
    bands[0, :2] = 0.0
    bands[1, :1] = 0.0
    bands[3, n - 1:] = 0.0
    bands[4, n - 2:] = 0.0
    return bands


def banded_matvec(bands, v):
    n = v.shape[0]
    out = bands[2] * v
    for k in (0, 1, 3, 4):
        d = k - 2
        if d < 0:
            out[-d:] += bands[k, -d:] * v[:n + d]
        else:
            out[:n - d] += bands[k, :n - d] * v[d:]
    return out


def banded_rmatvec(bands, p):
    n = p.shape[0]
    out = bands[2] * p
    for k in (0, 1, 3, 4):
        d = k - 2
        if d < 0:
            out[:n + d] += bands[k, -d:] * p[-d:]
        else:
            out[d:] += bands[k, :n - d] * p[:n - d]
    return out


def _burgers_split(y, alpha):
    yp = np.concatenate([0 * y[:2], y, 0 * y[:2]]) if y.shape[0] >= 2 else np.pad(y, 2)
    q = 0.5 * yp * yp
    return yp, 0.5 * (q + alpha * yp), 0.5 * (q - alpha * yp)


def burgers_weno3_rhs(y, alpha, eps, dx):
    _, hp, hm = _burgers_split(y, alpha)
    fh = weno3_fluxes(hp, hm, eps)
    return -(fh[1:] - fh[:-1]) / dx


def burgers_weno3_jacobian(y, alpha, eps, dx):
    yp, hp, hm = _burgers_split(y, alpha)
    return weno3_flux_jacobian(hp, hm, 0.5 * (yp + alpha), 0.5 * (yp - alpha), eps, dx)
