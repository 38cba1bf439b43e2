"""Oracle-versus-closed-form residual checks used by ``qficlone verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import EquatorialState, Machine, MachineParams, qfi_scaled
from .machines import pqcm_d_shrink, uqcm_boundary, uqcm_frontier_residual, uqcm_shrink
from .oracle import (
    clone_pqcm,
    clone_uqcm,
    partial_trace,
    qfi_eq2,
    qfi_sld_fd,
    scaled_residual,
    scaled_rho_family,
)

DEFAULT_TOLS = {
    "qfi_eq2": 1e-8,
    "qfi_sld": 1e-6,
    "uqcm_closure": 1e-10,
    "pqcm_closure": 1e-10,
    "uqcm_frontier": 1e-10,
    "qubit_qfi_tradeoff": 1e-9,
}


@dataclass
class CheckResult:
    name: str
    tol: float
    max_residual: float = 0.0
    worst: Optional[tuple] = None  # (d, eta, machine)

    def update(self, residual: float, where: tuple):
        if residual > self.max_residual or self.worst is None:
            self.max_residual = float(residual)
            self.worst = where

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def random_uqcm_params(d: int, rng: np.random.Generator) -> MachineParams:
    b = rng.uniform(0.0, 1.0)
    a = -b / d + math.sqrt(b * b / (d * d) - b * b + 1.0)
    return MachineParams(Machine.UQCM, d, a, b)


def random_pqcm_params(d: int, rng: np.random.Generator) -> MachineParams:
    r = math.sqrt(rng.uniform(0.0, 1.0) / (d - 1))
    phi = rng.uniform(0.0, math.pi / 2)
    a, b = r * math.cos(phi), r * math.sin(phi)
    c = math.sqrt(max(1.0 - (d - 1) * (a * a + b * b), 0.0))
    return MachineParams(Machine.PQCM, d, a, b, c)


def closure_residual(state: EquatorialState, params: MachineParams) -> tuple[float, float, float]:
    """Max scaled-form residual of both copies, and the analytic (eta_A, eta_B)."""
    if params.kind is Machine.UQCM:
        joint = clone_uqcm(state, params)
        eta_a, eta_b = uqcm_shrink(params.a, params.b, params.d)
    else:
        joint = clone_pqcm(state, params)
        eta_a, eta_b = pqcm_d_shrink(params.a, params.b, params.d)
    res = max(scaled_residual(partial_trace(joint, 0), state, eta_a),
              scaled_residual(partial_trace(joint, 1), state, eta_b))
    return res, eta_a, eta_b


def qubit_tradeoff_residual(eta_a):
    """Residual of F_A + F_B + (sqrt F_A - 1)(sqrt F_B - 1) = 1 on the qubit UQCM frontier."""
    eta_b = uqcm_boundary(eta_a, 2)
    fa, fb = qfi_scaled(eta_a, 2), qfi_scaled(eta_b, 2)
    return np.abs(fa + fb + (np.sqrt(fa) - 1) * (np.sqrt(fb) - 1) - 1)


def run_checks(d_min: int, d_max: int, tol: Optional[float] = None, draws: int = 10,
               seed: int = 0, eta_step: float = 0.05) -> list[CheckResult]:
    """Run every residual check over d_min..d_max.

    ``tol`` replaces all default tolerances when given.
    """
    tols = {k: (tol if tol is not None else v) for k, v in DEFAULT_TOLS.items()}
    checks = {k: CheckResult(k, t) for k, t in tols.items()}
    if d_min > 2:
        del checks["qubit_qfi_tradeoff"]
    rng = np.random.default_rng(seed)
    etas = np.round(np.arange(0.0, 1.0 + eta_step / 2, eta_step), 12)

    for d in range(d_min, d_max + 1):
        state = EquatorialState.random(d, rng)
        for eta in etas:
            exact = qfi_scaled(eta, d)
            for k in sorted({0, d - 1}):
                checks["qfi_eq2"].update(abs(qfi_eq2(state, eta, k) - exact), (d, float(eta), "scaled"))
            fd = qfi_sld_fd(scaled_rho_family(state, eta, d - 1), state.phases[d - 1])
            checks["qfi_sld"].update(abs(fd - exact), (d, float(eta), "scaled"))
            eb = uqcm_boundary(eta, d)
            checks["uqcm_frontier"].update(abs(uqcm_frontier_residual(eta, eb, d)), (d, float(eta), "uqcm"))

        for _ in range(draws):
            for kind, make in ((Machine.UQCM, random_uqcm_params), (Machine.PQCM, random_pqcm_params)):
                params = make(d, rng)
                res, eta_a, _ = closure_residual(EquatorialState.random(d, rng), params)
                checks[f"{kind.value}_closure"].update(res, (d, eta_a, kind.value))

    if "qubit_qfi_tradeoff" in checks:
        grid = np.linspace(0.0, 1.0, 1001)
        res = qubit_tradeoff_residual(grid)
        i = int(np.argmax(res))
        checks["qubit_qfi_tradeoff"].update(float(res[i]), (2, float(grid[i]), "uqcm"))
    return list(checks.values())
