# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled WENO3 kernels; see ``_pykernels`` for conventions."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

cdef double G_FAR = 1.0 / 3.0
cdef double G_NEAR = 2.0 / 3.0


cdef inline double _upwind(double far, double c, double near, double eps) nogil:
    cdef double bf = (c - far) * (c - far)
    cdef double bn = (near - c) * (near - c)
    cdef double af = G_FAR / ((eps + bf) * (eps + bf))
    cdef double an = G_NEAR / ((eps + bn) * (eps + bn))
    cdef double w = af / (af + an)
    return 0.5 * (c + near) + w * (-0.5 * far + c - 0.5 * near)


cdef inline void _upwind_grad(double far, double c, double near, double eps,
                              double *gf, double *gc, double *gn) noexcept nogil:
    cdef double bf = (c - far) * (c - far)
    cdef double bn = (near - c) * (near - c)
    cdef double af = G_FAR / ((eps + bf) * (eps + bf))
    cdef double an = G_NEAR / ((eps + bn) * (eps + bn))
    cdef double w = af / (af + an)
    cdef double d = -0.5 * far + c - 0.5 * near
    cdef double ww = 4.0 * w * (1.0 - w)
    cdef double A = ww * (c - far) / (eps + bf)
    cdef double B = ww * (near - c) / (eps + bn)
    gf[0] = -0.5 * w + d * A
    gc[0] = 0.5 + w - d * (A + B)
    gn[0] = 0.5 - 0.5 * w + d * B


def weno3_fluxes(double[::1] hp, double[::1] hm, double eps):
    cdef Py_ssize_t n = hp.shape[0] - 4
    cdef Py_ssize_t i
    out = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n + 1):
            o[i] = (_upwind(hp[i], hp[i + 1], hp[i + 2], eps)
                    + _upwind(hm[i + 3], hm[i + 2], hm[i + 1], eps))
    return out


def weno3_flux_jacobian(double[::1] hp, double[::1] hm, double[::1] dhp,
                        double[::1] dhm, double eps, double dx):
    cdef Py_ssize_t n = hp.shape[0] - 4
    cdef Py_ssize_t i
    cdef double pf, pc, pn, mf, mc, mn
    cdef double inv = 1.0 / dx
    d = np.empty((4, n + 1), dtype=np.float64)
    cdef double[:, ::1] D = d
    bands = np.zeros((5, n), dtype=np.float64)
    cdef double[:, ::1] b = bands
    with nogil:
        for i in range(n + 1):
            _upwind_grad(hp[i], hp[i + 1], hp[i + 2], eps, &pf, &pc, &pn)
            _upwind_grad(hm[i + 3], hm[i + 2], hm[i + 1], eps, &mf, &mc, &mn)
            D[0, i] = pf * dhp[i]
            D[1, i] = pc * dhp[i + 1] + mn * dhm[i + 1]
            D[2, i] = pn * dhp[i + 2] + mc * dhm[i + 2]
            D[3, i] = mf * dhm[i + 3]
        for i in range(n):
            b[0, i] = -D[0, i] * inv
            b[1, i] = (D[0, i + 1] - D[1, i]) * inv
            b[2, i] = (D[1, i + 1] - D[2, i]) * inv
            b[3, i] = (D[2, i + 1] - D[3, i]) * inv
            b[4, i] = D[3, i + 1] * inv
        for i in range(min(2, n)):
            b[0, i] = 0.0
        b[1, 0] = 0.0
        b[3, n - 1] = 0.0
        for i in range(max(n - 2, 0), n):
            b[4, i] = 0.0
    return bands


def banded_matvec(double[:, ::1] bands, double[::1] v):
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t r, k, c
    cdef double s
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for r in range(n):
            s = 0.0
            for k in range(5):
                c = r + k - 2
                if 0 <= c < n:
                    s = s + bands[k, r] * v[c]
            o[r] = s
    return out


def banded_rmatvec(double[:, ::1] bands, double[::1] p):
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t c, k, r
    cdef double s
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for c in range(n):
            s = 0.0
            for k in range(5):
                r = c - k + 2
                if 0 <= r < n:
                    s = s + bands[k, r] * p[r]
            o[c] = s
    return out


def burgers_weno3_rhs(double[::1] y, double alpha, double eps, double dx):
    """Fused ``-F(y)`` for ``f = u^2/2`` with the zero halo handled inline."""
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t i, k
    cdef double u
    hp_arr = np.zeros(n + 4, dtype=np.float64)
    hm_arr = np.zeros(n + 4, dtype=np.float64)
    fh_arr = np.empty(n + 1, dtype=np.float64)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] hp = hp_arr, hm = hm_arr, fh = fh_arr, o = out
    cdef double inv = 1.0 / dx
    with nogil:
        for k in range(n):
            u = y[k]
            hp[k + 2] = 0.5 * (0.5 * u * u + alpha * u)
            hm[k + 2] = 0.5 * (0.5 * u * u - alpha * u)
        for i in range(n + 1):
            fh[i] = (_upwind(hp[i], hp[i + 1], hp[i + 2], eps)
                     + _upwind(hm[i + 3], hm[i + 2], hm[i + 1], eps))
        for k in range(n):
            o[k] = -(fh[k + 1] - fh[k]) * inv
    return out


def burgers_weno3_jacobian(double[::1] y, double alpha, double eps, double dx):
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t k
    cdef double u
    hp = np.zeros(n + 4, dtype=np.float64)
    hm = np.zeros(n + 4, dtype=np.float64)
    dhp = np.empty(n + 4, dtype=np.float64)
    dhm = np.empty(n + 4, dtype=np.float64)
    cdef double[::1] a = hp, b = hm, c = dhp, d = dhm
    with nogil:
        for k in range(n + 4):
            c[k] = 0.5 * alpha
            d[k] = -0.5 * alpha
        for k in range(n):
            u = y[k]
            a[k + 2] = 0.5 * (0.5 * u * u + alpha * u)
            b[k + 2] = 0.5 * (0.5 * u * u - alpha * u)
            c[k + 2] = 0.5 * (u + alpha)
            d[k + 2] = 0.5 * (u - alpha)
    return weno3_flux_jacobian(hp, hm, dhp, dhm, eps, dx)


cdef void _burgers_rhs(const double *y, Py_ssize_t n, double alpha, double eps,
                       double inv_dx, double *hp, double *hm, double *fh,
                       double *out) noexcept nogil:
    # hp/hm: length n + 4 with zero halo already in place
    cdef Py_ssize_t i, k
    cdef double u
    for k in range(n):
        u = y[k]
        hp[k + 2] = 0.5 * (0.5 * u * u + alpha * u)
        hm[k + 2] = 0.5 * (0.5 * u * u - alpha * u)
    for i in range(n + 1):
        fh[i] = (_upwind(hp[i], hp[i + 1], hp[i + 2], eps)
                 + _upwind(hm[i + 3], hm[i + 2], hm[i + 1], eps))
    for k in range(n):
        out[k] = -(fh[k + 1] - fh[k]) * inv_dx


def burgers_weno3_integrate(double[::1] u0, double alpha, double eps, double dx,
                            double dt, Py_ssize_t n_steps, str scheme, bint record):
    """Whole WENO3 forward solve for Burgers in one call.

    Returns ``(final, stages)``; ``stages`` has shape ``(n_steps, s, N)``
    (``s = 3`` for SSPRK3, 4 for RK4), or ``(0, s, N)`` without recording,
    and ``None`` as final if a non-finite value appeared (with the step
    index as third element).
    """
    cdef Py_ssize_t n = u0.shape[0]
    cdef Py_ssize_t s = 3 if scheme == "weno3-ssprk3" else 4
    cdef bint rk3 = s == 3
    stages_arr = np.empty((n_steps if record else 0, s, n), dtype=np.float64)
    work = np.zeros((4, n + 4), dtype=np.float64)
    tmp = np.empty((8, n), dtype=np.float64)
    y_arr = np.array(u0, dtype=np.float64, copy=True)
    cdef double[:, :, ::1] st = stages_arr
    cdef double[:, ::1] w = work
    cdef double[:, ::1] t = tmp
    cdef double[::1] y = y_arr
    cdef double *hp = &w[0, 0]
    cdef double *hm = &w[1, 0]
    cdef double *fh = &w[2, 0]
    cdef double *y1 = &t[0, 0]
    cdef double *y2 = &t[1, 0]
    cdef double *y3 = &t[2, 0]
    cdef double *k1 = &t[3, 0]
    cdef double *k2 = &t[4, 0]
    cdef double *k3 = &t[5, 0]
    cdef double *k4 = &t[6, 0]
    cdef double *yp = &y[0]
    cdef double inv = 1.0 / dx
    cdef Py_ssize_t step, j
    cdef Py_ssize_t failed = -1
    cdef double v
    with nogil:
        for step in range(n_steps):
            if rk3:
                _burgers_rhs(yp, n, alpha, eps, inv, hp, hm, fh, k1)
                for j in range(n):
                    y1[j] = yp[j] + dt * k1[j]
                _burgers_rhs(y1, n, alpha, eps, inv, hp, hm, fh, k2)
                for j in range(n):
                    y2[j] = 0.75 * yp[j] + 0.25 * y1[j] + 0.25 * dt * k2[j]
                _burgers_rhs(y2, n, alpha, eps, inv, hp, hm, fh, k3)
                if record:
                    for j in range(n):
                        st[step, 0, j] = yp[j]
                        st[step, 1, j] = y1[j]
                        st[step, 2, j] = y2[j]
                for j in range(n):
                    yp[j] = yp[j] / 3.0 + (2.0 / 3.0) * y2[j] + (2.0 / 3.0) * dt * k3[j]
            else:
                _burgers_rhs(yp, n, alpha, eps, inv, hp, hm, fh, k1)
                for j in range(n):
                    y1[j] = yp[j] + 0.5 * dt * k1[j]
                _burgers_rhs(y1, n, alpha, eps, inv, hp, hm, fh, k2)
                for j in range(n):
                    y2[j] = yp[j] + 0.5 * dt * k2[j]
                _burgers_rhs(y2, n, alpha, eps, inv, hp, hm, fh, k3)
                for j in range(n):
                    y3[j] = yp[j] + dt * k3[j]
                _burgers_rhs(y3, n, alpha, eps, inv, hp, hm, fh, k4)
                if record:
                    for j in range(n):
                        st[step, 0, j] = yp[j]
                        st[step, 1, j] = y1[j]
                        st[step, 2, j] = y2[j]
                        st[step, 3, j] = y3[j]
                for j in range(n):
                    yp[j] = yp[j] + (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            for j in range(n):
                v = yp[j]
                if v != v or v - v != 0.0:
                    failed = step
                    break
            if failed >= 0:
                break
    if failed >= 0:
        return None, stages_arr, failed
    return y_arr, stages_arr, -1
