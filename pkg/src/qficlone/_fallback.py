"""Pure numpy implementation of the PQCM frontier kernel.

Vectorized across the eta_A grid; mirrors ``_kernels.pyx`` step for step so
both backends return the same numbers to rounding.
"""
import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
RADICAND_SLACK = 1e-12
MAX_GOLDEN_ITER = 200


def pqcm_eta_b(a, eta_a, d):
    """Copy-B shrinking factor for fixed eta_A and copy-A amplitude ``a``.

    Returns -inf where ``a`` is infeasible.
    """
    a = np.asarray(a, dtype=float)
    eta_a = np.asarray(eta_a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = (eta_a - (d - 2) * a * a) / (2.0 * a)
        r = (1.0 - c * c) / (d - 1) - a * a
    bad = ~(a > 0) | (c < -RADICAND_SLACK) | (c > 1 + RADICAND_SLACK) | (r < -RADICAND_SLACK) | np.isnan(r)
    c = np.clip(c, 0.0, 1.0)
    r = np.where(bad, 0.0, np.maximum(r, 0.0))
    out = (d - 2) * r + 2.0 * c * np.sqrt(r)
    return np.where(bad, -np.inf, out)


def feasible_interval(eta_a, d):
    """Range of copy-A amplitudes giving shrinking factor ``eta_a``.

    Bounded below/above by the b = 0 curve, a quadratic in a^2 whose roots
    multiply to eta_a^2 / d^2, and above by c >= 0.
    """
    e = np.asarray(eta_a, dtype=float)
    s = 2.0 + (d - 2) * e
    disc = 2.0 * np.sqrt(np.maximum((1.0 - e) * (1.0 + (d - 1) * e), 0.0))
    t_hi = (s + disc) / (d * d)
    t_lo = e * e / (d * d * t_hi)
    if d > 2:
        t_hi = np.minimum(t_hi, e / (d - 2))
    return np.sqrt(t_lo), np.sqrt(t_hi)


def pqcm_frontier(eta_a, d, tol=1e-10, n_grid=1024):
    """Maximize copy B's shrinking factor over ``a`` for each eta_A.

    Coarse grid over the feasible interval, then golden-section refinement in
    the two grid cells around the best sample.  Returns ``(eta_b, a_opt)``
    arrays; eta_A = 0 maps to (1, 0) and eta_A = 1 to (0, 1/sqrt(d)), where
    the feasible interval collapses to a point.
    """
    e = np.atleast_1d(np.asarray(eta_a, dtype=float))
    eta_b = np.ones_like(e)
    a_opt = np.zeros_like(e)
    top = e >= 1
    eta_b[top] = 0.0
    a_opt[top] = 1.0 / math.sqrt(d)
    live = (e > 0) & ~top
    if not live.any():
        return eta_b, a_opt
    ev = e[live]
    lo, hi = feasible_interval(ev, d)
    if np.any(lo > hi * (1 + 1e-12)):
        raise ValueError("empty feasible set for eta_a")
    hi = np.maximum(lo, hi)

    steps = np.linspace(0.0, 1.0, n_grid)
    grid = lo[:, None] + (hi - lo)[:, None] * steps[None, :]
    vals = pqcm_eta_b(grid, ev[:, None], d)
    best = np.argmax(vals, axis=1)
    rows = np.arange(ev.size)
    g_val = vals[rows, best]
    g_arg = grid[rows, best]
    if not np.all(np.isfinite(g_val)):
        raise ValueError("no feasible amplitude found on the search grid")

    left = grid[rows, np.maximum(best - 1, 0)]
    right = grid[rows, np.minimum(best + 1, n_grid - 1)]
    width = float(np.max(right - left))
    n_iter = 0
    if width > tol:
        n_iter = min(MAX_GOLDEN_ITER, int(math.ceil(math.log(tol / width) / math.log(INV_PHI))))

    x1 = right - INV_PHI * (right - left)
    x2 = left + INV_PHI * (right - left)
    f1 = pqcm_eta_b(x1, ev, d)
    f2 = pqcm_eta_b(x2, ev, d)
    for _ in range(n_iter):
        up = f1 < f2
        left = np.where(up, x1, left)
        right = np.where(up, right, x2)
        x_new = np.where(up, left + INV_PHI * (right - left), right - INV_PHI * (right - left))
        f_new = pqcm_eta_b(x_new, ev, d)
        x1, f1, x2, f2 = (
            np.where(up, x2, x_new), np.where(up, f2, f_new),
            np.where(up, x_new, x1), np.where(up, f_new, f1),
        )
    xm = 0.5 * (left + right)
    fm = pqcm_eta_b(xm, ev, d)

    cand_x = np.stack([g_arg, x1, x2, xm])
    cand_f = np.stack([g_val, f1, f2, fm])
    pick = np.argmax(cand_f, axis=0)
    eta_b[live] = np.clip(cand_f[pick, rows], 0.0, 1.0)
    a_opt[live] = cand_x[pick, rows]
    return eta_b, a_opt
