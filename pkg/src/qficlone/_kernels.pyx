# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled PQCM frontier kernel (same algorithm as ``_fallback``)."""
from libc.math cimport sqrt, log, ceil, INFINITY, fmin, fmax

import numpy as np

cdef double INV_PHI = 0.6180339887498949
cdef double RADICAND_SLACK = 1e-12
cdef int MAX_GOLDEN_ITER = 200


cdef inline double _eta_b(double a, double e, int d) noexcept nogil:
    cdef double c, r
    if not a > 0:
        return -INFINITY
    c = (e - (d - 2) * a * a) / (2.0 * a)
    if c < -RADICAND_SLACK or c > 1.0 + RADICAND_SLACK:
        return -INFINITY
    r = (1.0 - c * c) / (d - 1) - a * a
    if not r >= -RADICAND_SLACK:
        return -INFINITY
    c = fmin(fmax(c, 0.0), 1.0)
    r = fmax(r, 0.0)
    return (d - 2) * r + 2.0 * c * sqrt(r)


cdef int _optimize_one(double e, int d, double tol, int n_grid,
                       double* out_eta, double* out_a) noexcept nogil:
    cdef double s, disc, t_hi, t_lo, lo, hi, x, f
    cdef double g_val = -INFINITY, g_arg = 0.0
    cdef double left, right, x1, x2, f1, f2, xm, fm
    cdef int i, best = 0, n_iter = 0, it

    if e <= 0.0:
        out_eta[0] = 1.0
        out_a[0] = 0.0
        return 0
    if e >= 1.0:
        out_eta[0] = 0.0
        out_a[0] = 1.0 / sqrt(<double>d)
        return 0
    s = 2.0 + (d - 2) * e
    disc = 2.0 * sqrt(fmax((1.0 - e) * (1.0 + (d - 1) * e), 0.0))
    t_hi = (s + disc) / (d * d)
    t_lo = e * e / (d * d * t_hi)
    if d > 2:
        t_hi = fmin(t_hi, e / (d - 2))
    lo = sqrt(t_lo)
    hi = sqrt(t_hi)
    if lo > hi * (1.0 + 1e-12):
        return 1
    hi = fmax(lo, hi)

    for i in range(n_grid):
        x = lo + (hi - lo) * (<double>i / (n_grid - 1))
        f = _eta_b(x, e, d)
        if f > g_val:
            g_val = f
            g_arg = x
            best = i
    if g_val == -INFINITY:
        return 2

    left = lo + (hi - lo) * (<double>(best - 1 if best > 0 else 0) / (n_grid - 1))
    right = lo + (hi - lo) * (<double>(best + 1 if best < n_grid - 1 else n_grid - 1) / (n_grid - 1))
    if right - left > tol:
        n_iter = <int>ceil(log(tol / (right - left)) / log(INV_PHI))
        if n_iter > MAX_GOLDEN_ITER:
            n_iter = MAX_GOLDEN_ITER

    x1 = right - INV_PHI * (right - left)
    x2 = left + INV_PHI * (right - left)
    f1 = _eta_b(x1, e, d)
    f2 = _eta_b(x2, e, d)
    for it in range(n_iter):
        if f1 < f2:
            left = x1
            x1 = x2
            f1 = f2
            x2 = left + INV_PHI * (right - left)
            f2 = _eta_b(x2, e, d)
        else:
            right = x2
            x2 = x1
            f2 = f1
            x1 = right - INV_PHI * (right - left)
            f1 = _eta_b(x1, e, d)
    xm = 0.5 * (left + right)
    fm = _eta_b(xm, e, d)

    if f1 > g_val:
        g_val = f1
        g_arg = x1
    if f2 > g_val:
        g_val = f2
        g_arg = x2
    if fm > g_val:
        g_val = fm
        g_arg = xm
    out_eta[0] = fmin(fmax(g_val, 0.0), 1.0)
    out_a[0] = g_arg
    return 0


def pqcm_eta_b(a, eta_a, int d):
    """Scalar/array version of the copy-B shrinking factor (for tests)."""
    a_arr, e_arr = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(eta_a, dtype=float))
    out = np.empty(a_arr.shape)
    cdef double[::1] av = np.ascontiguousarray(a_arr).ravel()
    cdef double[::1] ev = np.ascontiguousarray(e_arr).ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t i
    for i in range(av.shape[0]):
        ov[i] = _eta_b(av[i], ev[i], d)
    return out


def pqcm_frontier(eta_a, int d, double tol=1e-10, int n_grid=1024):
    """Compiled counterpart of ``_fallback.pqcm_frontier``."""
    cdef double[::1] e = np.ascontiguousarray(np.atleast_1d(np.asarray(eta_a, dtype=float)))
    cdef Py_ssize_t n = e.shape[0], i
    eta_b = np.empty(n)
    a_opt = np.empty(n)
    cdef double[::1] ob = eta_b
    cdef double[::1] oa = a_opt
    cdef int status = 0
    with nogil:
        for i in range(n):
            status = _optimize_one(e[i], d, tol, n_grid, &ob[i], &oa[i])
            if status != 0:
                break
    if status == 1:
        raise ValueError("empty feasible set for eta_a")
    if status == 2:
        raise ValueError("no feasible amplitude found on the search grid")
    return eta_b, a_opt
