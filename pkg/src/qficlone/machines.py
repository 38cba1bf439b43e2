"""Asymmetric UQCM and PQCM in dimension d: amplitudes, shrinking factors, frontiers."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import DomainError, Machine, MachineParams, _check_dim, _unwrap, clamp_eta

SHRINK_NORM_TOL = 1e-9
RADICAND_SLACK = 1e-12


class InfeasibleError(DomainError):
    """No machine with the requested amplitudes or shrinking factor exists."""


@dataclass(frozen=True)
class BoundarySample:
    eta_a: float
    eta_b: float
    params: MachineParams
    optimal: bool = True


# ------------------------------------------------------------------ UQCM


def uqcm_shrink(a: float, b: float, d: int) -> tuple[float, float]:
    """Shrinking factors (1 - b^2, 1 - a^2) of the asymmetric UQCM."""
    d = _check_dim(d)
    res = a * a + b * b + 2 * a * b / d - 1.0
    if abs(res) > SHRINK_NORM_TOL:
        raise DomainError(f"UQCM normalization violated by {res:.3e} (d={d})")
    return clamp_eta(1.0 - b * b), clamp_eta(1.0 - a * a)


def uqcm_constant(d: int) -> float:
    """Ellipse coefficient (2d^2 - 4) / d^2 of the no-cloning inequality."""
    return (2.0 * d * d - 4.0) / (d * d)


def uqcm_boundary(eta_a, d: int):
    """Optimal-frontier eta_B for a given eta_A (UQCM).

    Larger root of eta_B^2 - C x eta_B + (eta_A^2 - 1 + C x) = 0 with
    x = 1 - eta_A.  The discriminant factors as 16 x (1 - x + x/d^2) / d^2,
    which keeps it non-negative on [0, 1] without cancellation.
    """
    d = _check_dim(d)
    x = 1.0 - np.asarray(clamp_eta(eta_a), dtype=float)
    C = uqcm_constant(d)
    eta_b = 0.5 * C * x + (2.0 / d) * np.sqrt(x * (1.0 - x) + x * x / (d * d))
    return _unwrap(np.clip(eta_b, 0.0, 1.0))


def uqcm_frontier_residual(eta_a, eta_b, d: int):
    """LHS minus RHS of the no-cloning inequality; zero on the frontier."""
    ea = np.asarray(eta_a, dtype=float)
    eb = np.asarray(eta_b, dtype=float)
    return _unwrap(ea * ea + eb * eb + uqcm_constant(d) * (1 - ea) * (1 - eb) - 1.0)


def uqcm_params_from_eta(eta_a: float, d: int) -> MachineParams:
    """UQCM amplitudes realizing the frontier point at ``eta_a``."""
    d = _check_dim(d)
    eta_a = clamp_eta(eta_a)
    b = math.sqrt(1.0 - eta_a)
    # non-negative root of a^2 + (2b/d) a + b^2 - 1 = 0
    a = -b / d + math.sqrt(b * b / (d * d) - b * b + 1.0)
    return MachineParams(Machine.UQCM, d, min(max(a, 0.0), 1.0), b)


# ------------------------------------------------------------------ PQCM


def pqcm2_optimal(eta_a: float) -> tuple[float, float]:
    """Qubit PQCM optimum: eta_B = sqrt(1 - eta_A^2) at a = eta_A / sqrt(2)."""
    eta_a = clamp_eta(eta_a)
    return math.sqrt(max(1.0 - eta_a * eta_a, 0.0)), eta_a / math.sqrt(2.0)


def pqcm_d_shrink(a: float, b: float, d: int) -> tuple[float, float]:
    d = _check_dim(d)
    rad = 1.0 - (d - 1) * (a * a + b * b)
    if rad < -RADICAND_SLACK:
        raise InfeasibleError(f"(d-1)(a^2+b^2) exceeds 1 by {-rad:.3e}")
    c = math.sqrt(max(rad, 0.0))
    return (
        clamp_eta((d - 2) * a * a + 2 * a * c),
        clamp_eta((d - 2) * b * b + 2 * b * c),
    )


def pqcm_d_tradeoff(eta_a: float, a: float, d: int) -> float:
    """Copy-B shrinking factor with b eliminated, for a fixed copy-A amplitude.

    Not optimal on its own; :func:`pqcm_d_optimal` maximizes it over ``a``.
    """
    d = _check_dim(d)
    if a <= 0:
        raise InfeasibleError("amplitude a must be positive")
    u = (eta_a - (d - 2) * a * a) / (2 * a)
    if u < -RADICAND_SLACK or u > 1 + RADICAND_SLACK:
        raise InfeasibleError(f"a={a} gives c={u:.6g} outside [0, 1] for eta_a={eta_a}")
    inner = (1 - u * u) / (d - 1) - a * a
    if inner < -RADICAND_SLACK:
        raise InfeasibleError(f"a={a} gives b^2={inner:.3e} < 0 for eta_a={eta_a}")
    first = (d - 2) / (d - 1) * (1 - (d - 1) * a * a - u * u)
    second = (eta_a - (d - 2) * a * a) / a * math.sqrt(max(inner, 0.0))
    return first + second


def pqcm_d_optimal(eta_a: float, d: int, tol: float = 1e-10, n_grid: int = 1024) -> tuple[float, float]:
    """Best copy-B shrinking factor at fixed eta_A, and the maximizing ``a``."""
    d = _check_dim(d)
    if not tol > 0:
        raise DomainError("tol must be positive")
    eta_a = clamp_eta(eta_a)
    try:
        eta_b, a_opt = kernels.pqcm_frontier(np.array([eta_a]), d, tol, n_grid)
    except ValueError as exc:
        raise InfeasibleError(str(exc)) from None
    return float(eta_b[0]), float(a_opt[0])


def pqcm_params(eta_a: float, a: float, d: int) -> MachineParams:
    """PQCM amplitudes (a, b, c) with copy-A factor ``eta_a`` and amplitude ``a``."""
    d = _check_dim(d)
    if a <= 0:
        if eta_a > RADICAND_SLACK:
            raise InfeasibleError("a = 0 only realizes eta_a = 0")
        # all quality to copy B: b = c = 1/sqrt(d)
        s = 1.0 / math.sqrt(d)
        return MachineParams(Machine.PQCM, d, 0.0, s, s)
    c = (eta_a - (d - 2) * a * a) / (2 * a)
    b2 = (1 - c * c) / (d - 1) - a * a
    if c < -RADICAND_SLACK or b2 < -RADICAND_SLACK:
        raise InfeasibleError(f"a={a} infeasible for eta_a={eta_a}")
    c = min(max(c, 0.0), 1.0)
    b = math.sqrt(max(b2, 0.0))
    # re-derive c from the normalization so it holds to rounding
    c = math.sqrt(max(1.0 - (d - 1) * (a * a + b * b), 0.0))
    return MachineParams(Machine.PQCM, d, a, b, c, tol=1e-10)


# ------------------------------------------------------------- frontiers


def frontier(machine: Machine | str, eta_a, d: int, tol: float = 1e-10):
    """Optimal eta_B along an array of eta_A values."""
    machine = Machine.parse(machine)
    d = _check_dim(d)
    if machine is Machine.UQCM:
        return uqcm_boundary(eta_a, d)
    e = np.asarray(clamp_eta(eta_a), dtype=float)
    if d == 2:
        return _unwrap(np.sqrt(np.maximum(1.0 - e * e, 0.0)))
    eta_b, _ = kernels.pqcm_frontier(np.atleast_1d(e), d, tol)
    return float(eta_b[0]) if e.ndim == 0 else eta_b


def frontier_sample(machine: Machine | str, eta_a: float, d: int, tol: float = 1e-10) -> BoundarySample:
    machine = Machine.parse(machine)
    d = _check_dim(d)
    eta_a = clamp_eta(eta_a)
    if machine is Machine.UQCM:
        params = uqcm_params_from_eta(eta_a, d)
        return BoundarySample(eta_a, uqcm_boundary(eta_a, d), params)
    if d == 2:
        eta_b, a_opt = pqcm2_optimal(eta_a)
    else:
        eta_b, a_opt = pqcm_d_optimal(eta_a, d, tol)
    if eta_a >= 1.0:
        a_opt = 1.0 / math.sqrt(d)
    return BoundarySample(eta_a, eta_b, pqcm_params(eta_a, a_opt, d))
