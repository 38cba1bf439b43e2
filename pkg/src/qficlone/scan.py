"""Distributability landscapes along optimal frontiers and the scan over dimension."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .core import (
    Machine,
    TradeoffPoint,
    _check_dim,
    fidelity_scaled,
    qfi_scaled,
    symmetric_pqcm_eta,
    symmetric_uqcm_eta,
)
from .machines import frontier, uqcm_boundary

DEFAULT_N = 4001
DEFAULT_REFINE_TOL = 1e-10
FLAT_TOL = 1e-13
TIE_TOL = 1e-12


class ResolutionError(RuntimeError):
    """Extrema sit too close together for the sampling grid to separate them."""


def symmetric_point(machine: Machine | str, d: int) -> float:
    machine = Machine.parse(machine)
    return symmetric_uqcm_eta(d) if machine is Machine.UQCM else symmetric_pqcm_eta(d)


@dataclass(frozen=True)
class Curve:
    machine: Machine
    d: int
    eta_a: np.ndarray
    eta_b: np.ndarray
    tol: float = DEFAULT_REFINE_TOL

    @property
    def qfi_a(self):
        return qfi_scaled(self.eta_a, self.d)

    @property
    def qfi_b(self):
        return qfi_scaled(self.eta_b, self.d)

    @property
    def sum_qfi(self) -> np.ndarray:
        return self.qfi_a + self.qfi_b

    @property
    def sum_fid(self) -> np.ndarray:
        return fidelity_scaled(self.eta_a, self.d) + fidelity_scaled(self.eta_b, self.d)

    @property
    def points(self) -> list[TradeoffPoint]:
        return [TradeoffPoint.from_etas(a, b, self.d) for a, b in zip(self.eta_a, self.eta_b)]

    @property
    def spacing(self) -> float:
        return 1.0 / (len(self.eta_a) - 1)

    def sum_qfi_at(self, eta_a: float) -> float:
        return sum_qfi_at(self.machine, self.d, eta_a, self.tol)


def sum_qfi_at(machine: Machine | str, d: int, eta_a: float, tol: float = DEFAULT_REFINE_TOL) -> float:
    eta_b = frontier(machine, eta_a, d, tol)
    return qfi_scaled(eta_a, d) + qfi_scaled(eta_b, d)


def qfi_sum_curve(machine: Machine | str, d: int, n: int = DEFAULT_N, tol: float = DEFAULT_REFINE_TOL) -> Curve:
    """Sample the optimal frontier at ``n`` uniform eta_A values in [0, 1]."""
    machine = Machine.parse(machine)
    d = _check_dim(d)
    if n < 3:
        raise ValueError(f"need at least 3 samples, got {n}")
    eta_a = np.linspace(0.0, 1.0, n)
    return Curve(machine, d, eta_a, np.asarray(frontier(machine, eta_a, d, tol)), tol)


@dataclass(frozen=True)
class Extremum:
    eta_a: float
    sum_qfi: float
    kind: str  # "min" or "max"
    interior: bool = True


@dataclass(frozen=True)
class ExtremaReport:
    d: int
    machine: Machine
    extrema: tuple[Extremum, ...]
    global_min_eta_a: float
    global_min_value: float
    symmetric_point: float
    grid_tol: float
    flat: bool = False
    mirror_eta_a: float = field(default=float("nan"))

    @property
    def interior(self) -> tuple[Extremum, ...]:
        return tuple(x for x in self.extrema if x.interior)

    @property
    def interior_count(self) -> int:
        return len(self.interior)

    @property
    def total_count(self) -> int:
        return len(self.extrema)

    @property
    def is_symmetric(self) -> bool:
        return (abs(self.global_min_eta_a - self.symmetric_point) <= self.grid_tol
                or abs(self.mirror_eta_a - self.symmetric_point) <= self.grid_tol)


def _sign_changes(s: np.ndarray, flat_tol: float):
    diffs = np.diff(s)
    signs = np.sign(diffs)
    signs[np.abs(diffs) <= flat_tol * max(1.0, float(np.max(np.abs(s))))] = 0
    nz = np.flatnonzero(signs)
    changes = [(j, k) for j, k in zip(nz[:-1], nz[1:]) if signs[j] != signs[k]]
    return signs, nz, changes


def _refine(curve: Curve, lo: int, mid: int, hi: int, kind: str, tol: float) -> tuple[float, float]:
    e, s = curve.eta_a, curve.sum_qfi
    sign = 1.0 if kind == "min" else -1.0
    res = minimize_scalar(lambda x: sign * curve.sum_qfi_at(x), bracket=(e[lo], e[mid], e[hi]),
                          method="golden", tol=tol)
    x, fx = float(res.x), float(sign * res.fun)
    if not (e[lo] <= x <= e[hi]) or sign * fx > sign * s[mid]:
        return float(e[mid]), float(s[mid])
    return x, fx


def find_extrema(curve: Curve, refine_tol: float = DEFAULT_REFINE_TOL, flat_tol: float = FLAT_TOL) -> ExtremaReport:
    """Locate and classify the extrema of the summed QFI along ``curve``.

    Interior extrema come from sign changes of the first differences and are
    refined by golden-section search; the endpoints are classified from the
    slope next to them.  Mirror-image global minima tie-break to the smaller
    eta_A.
    """
    e, s = curve.eta_a, curve.sum_qfi
    sym = symmetric_point(curve.machine, curve.d)
    signs, nz, changes = _sign_changes(s, flat_tol)
    for (_, k1), (_, k2) in zip(changes[:-1], changes[1:]):
        if k2 - k1 < 3:
            raise ResolutionError(
                f"extrema near eta_a={e[k1]:.6g} and {e[k2]:.6g} are not resolved at n={len(e)}")

    extrema: list[Extremum] = []
    if nz.size:
        extrema.append(Extremum(0.0, float(s[0]), "min" if signs[nz[0]] > 0 else "max", False))
    for j, k in changes:
        kind = "min" if signs[j] < 0 else "max"
        window = s[j + 1:k + 1]
        mid = j + 1 + int(np.argmin(window) if kind == "min" else np.argmax(window))
        x, fx = _refine(curve, j, mid, k + 1, kind, refine_tol)
        extrema.append(Extremum(x, fx, kind))
    if nz.size:
        extrema.append(Extremum(1.0, float(s[-1]), "min" if signs[nz[-1]] < 0 else "max", False))

    minima = [x for x in extrema if x.interior and x.kind == "min"]
    if minima:
        best = min(x.sum_qfi for x in minima)
        ties = [x for x in minima if x.sum_qfi - best <= TIE_TOL * max(1.0, abs(best))]
        g = min(ties, key=lambda x: x.eta_a)
        g_eta, g_val = g.eta_a, g.sum_qfi
    elif not nz.size:
        g_eta, g_val = sym, curve.sum_qfi_at(sym)
    else:
        i = 1 + int(np.argmin(s[1:-1]))
        g_eta, g_val = float(e[i]), float(s[i])
    mirror = float(frontier(curve.machine, g_eta, curve.d, curve.tol))
    return ExtremaReport(curve.d, curve.machine, tuple(extrema), g_eta, g_val, sym,
                         curve.spacing, flat=not nz.size, mirror_eta_a=mirror)


def symmetric_curvature(machine: Machine | str, d: int, h: float = 1e-3, tol: float = DEFAULT_REFINE_TOL) -> float:
    """Second difference of the summed QFI at the symmetric point, divided by h^2."""
    sym = symmetric_point(machine, d)
    f = lambda x: sum_qfi_at(machine, d, x, tol)
    return (f(sym + h) - 2.0 * f(sym) + f(sym - h)) / (h * h)


@dataclass(frozen=True)
class ScanRow:
    d: int
    global_min_eta_a: float
    symmetric_point: float
    is_symmetric: bool
    extrema_count: int
    global_min_value: float


@dataclass(frozen=True)
class ScanRecord:
    machine: Machine
    rows: tuple[ScanRow, ...]

    @property
    def first_asymmetric_d(self) -> Optional[int]:
        return next((r.d for r in self.rows if not r.is_symmetric), None)

    @property
    def last_symmetric_d(self) -> Optional[int]:
        """Largest symmetric d below the first asymmetric one (the critical dimension)."""
        first = self.first_asymmetric_d
        cands = [r.d for r in self.rows if r.is_symmetric and (first is None or r.d < first)]
        return max(cands) if cands else None


def _scan_one(args) -> ScanRow:
    machine, d, n, refine_tol = args
    rep = find_extrema(qfi_sum_curve(machine, d, n, refine_tol), refine_tol)
    return ScanRow(d, rep.global_min_eta_a, rep.symmetric_point, rep.is_symmetric,
                   rep.interior_count, rep.global_min_value)


def bifurcation_scan(machine: Machine | str, d_min: int, d_max: int, n: int = DEFAULT_N,
                     refine_tol: float = DEFAULT_REFINE_TOL, workers: int = 1) -> ScanRecord:
    """Global-minimum location of the summed QFI for each d in [d_min, d_max].

    Dimensions are independent; with ``workers > 1`` they run in separate
    processes and are reassembled in dimension order.
    """
    machine = Machine.parse(machine)
    d_min, d_max = _check_dim(d_min), _check_dim(d_max)
    if d_max < d_min:
        raise ValueError(f"empty dimension range {d_min}:{d_max}")
    jobs = [(machine, d, n, refine_tol) for d in range(d_min, d_max + 1)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_one, jobs))
    else:
        rows = [_scan_one(j) for j in jobs]
    return ScanRecord(machine, tuple(rows))


def fidelity_optimum_check(d: int, n: int = DEFAULT_N, refine_tol: float = DEFAULT_REFINE_TOL) -> tuple[float, float]:
    """Argmax and maximum of the summed fidelity along the UQCM frontier."""
    d = _check_dim(d)
    eta_a = np.linspace(0.0, 1.0, n)
    f = lambda x: fidelity_scaled(x, d) + fidelity_scaled(uqcm_boundary(x, d), d)
    vals = f(eta_a)
    i = int(np.argmax(vals))
    if 0 < i < n - 1:
        res = minimize_scalar(lambda x: -f(x), bracket=(eta_a[i - 1], eta_a[i], eta_a[i + 1]),
                              method="golden", tol=refine_tol)
        if -res.fun >= vals[i] and eta_a[i - 1] <= res.x <= eta_a[i + 1]:
            return float(res.x), float(-res.fun)
    return float(eta_a[i]), float(vals[i])
