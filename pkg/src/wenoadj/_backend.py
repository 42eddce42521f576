"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback.  ``WENOADJ_BACKEND=python`` forces the fallback.  Arrays that are
not contiguous float64 (e.g. multiprecision object arrays) always take the
numpy path.
"""

import os

import numpy as np

from wenoadj import _pykernels

_compiled = None
if os.environ.get("WENOADJ_BACKEND", "").lower() != "python":
    try:
        from wenoadj import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

active = _compiled if _compiled is not None else _pykernels
BACKEND = active.BACKEND


def has_compiled() -> bool:
    return _compiled is not None


def get(name: str):
    """Module implementing backend ``name`` ("cython" or "python")."""
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def _fast(*arrays):
    return active is not _pykernels and all(
        a.dtype == np.float64 for a in arrays)


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def weno3_fluxes(hp, hm, eps):
    if _fast(hp, hm):
        return active.weno3_fluxes(_c(hp), _c(hm), float(eps))
    return _pykernels.weno3_fluxes(hp, hm, eps)


def weno3_flux_jacobian(hp, hm, dhp, dhm, eps, dx):
    if _fast(hp, hm, dhp, dhm):
        return active.weno3_flux_jacobian(_c(hp), _c(hm), _c(dhp), _c(dhm),
                                          float(eps), float(dx))
    return _pykernels.weno3_flux_jacobian(hp, hm, dhp, dhm, eps, dx)


def banded_matvec(bands, v):
    if _fast(bands, v):
        return active.banded_matvec(_c(bands), _c(v))
    return _pykernels.banded_matvec(bands, v)


def banded_rmatvec(bands, p):
    if _fast(bands, p):
        return active.banded_rmatvec(_c(bands), _c(p))
    return _pykernels.banded_rmatvec(bands, p)


def burgers_weno3_rhs(y, alpha, eps, dx):
    if _fast(y):
        return active.burgers_weno3_rhs(_c(y), float(alpha), float(eps), float(dx))
    return _pykernels.burgers_weno3_rhs(y, alpha, eps, dx)


def burgers_weno3_jacobian(y, alpha, eps, dx):
    if _fast(y):
        return active.burgers_weno3_jacobian(_c(y), float(alpha), float(eps), float(dx))
    return _pykernels.burgers_weno3_jacobian(y, alpha, eps, dx)


def fused_integrator():
    """Compiled whole-trajectory WENO3/Burgers integrator, or ``None``."""
    if active is _pykernels:
        return None
    return getattr(active, "burgers_weno3_integrate", None)
