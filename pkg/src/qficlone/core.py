"""Domain types and closed-form scalar functions of the shrinking factor.

Every reduced output state handled by this package has the scaled form

    rho = eta |psi><psi| + (1 - eta) / d * I_d

with |psi> an equatorial qudit state.  The functions here map the shrinking
factor ``eta`` and dimension ``d`` to the phase QFI, the fidelity with the
input, and back.  They accept floats or numpy arrays and return the same kind.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

ETA_SLACK = 1e-12
NORM_TOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of a closed-form map."""


class Machine(str, enum.Enum):
    UQCM = "uqcm"
    PQCM = "pqcm"

    @classmethod
    def parse(cls, value: "Machine | str") -> "Machine":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown machine {value!r}; expected 'uqcm' or 'pqcm'") from None


def _check_dim(d) -> int:
    if int(d) != d or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


def _unwrap(x):
    return float(x) if np.ndim(x) == 0 else x


def clamp_eta(eta):
    """Validate ``eta`` against [0, 1] with round-off slack, then clamp."""
    arr = np.asarray(eta, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < -ETA_SLACK) or np.any(arr > 1 + ETA_SLACK):
        raise DomainError(f"shrinking factor outside [0, 1]: {eta!r}")
    return _unwrap(np.clip(arr, 0.0, 1.0))


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class EquatorialState:
    """Qudit state with amplitudes exp(i theta_k) / sqrt(d)."""

    phases: tuple[float, ...]

    def __post_init__(self):
        phases = tuple(float(p) for p in self.phases)
        object.__setattr__(self, "phases", phases)
        if len(phases) < 2:
            raise DomainError("an equatorial state needs at least two phases (d >= 2)")

    @property
    def d(self) -> int:
        return len(self.phases)

    @classmethod
    def uniform(cls, d: int) -> "EquatorialState":
        return cls((0.0,) * _check_dim(d))

    @classmethod
    def random(cls, d: int, rng: np.random.Generator) -> "EquatorialState":
        return cls(tuple(rng.uniform(0.0, 2 * np.pi, _check_dim(d))))

    def with_phase(self, k: int, theta: float) -> "EquatorialState":
        phases = list(self.phases)
        phases[k] = theta
        return EquatorialState(tuple(phases))


@dataclass(frozen=True)
class ScaledOutputState:
    d: int
    eta: float
    input: EquatorialState

    def __post_init__(self):
        _check_dim(self.d)
        object.__setattr__(self, "eta", clamp_eta(self.eta))
        if self.input.d != self.d:
            raise DomainError(f"input state has d={self.input.d}, expected {self.d}")

    @property
    def qfi(self) -> float:
        return qfi_scaled(self.eta, self.d)

    @property
    def fidelity(self) -> float:
        return fidelity_scaled(self.eta, self.d)


@dataclass(frozen=True)
class MachineParams:
    """Real non-negative amplitudes of an asymmetric 1 -> 2 cloner.

    UQCM: a^2 + b^2 + 2ab/d = 1 (``c`` unused).
    PQCM: (d - 1)(a^2 + b^2) + c^2 = 1.
    """

    kind: Machine
    d: int
    a: float
    b: float
    c: float = 0.0
    tol: float = field(default=NORM_TOL, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Machine.parse(self.kind))
        _check_dim(self.d)
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not (-self.tol <= v <= 1 + self.tol):
                raise DomainError(f"amplitude {name}={v!r} outside [0, 1]")
        res = self.normalization_residual()
        if abs(res) > self.tol:
            raise DomainError(f"{self.kind.name} normalization violated by {res:.3e}")

    def normalization_residual(self) -> float:
        a, b, c, d = self.a, self.b, self.c, self.d
        if self.kind is Machine.UQCM:
            return a * a + b * b + 2 * a * b / d - 1.0
        return (d - 1) * (a * a + b * b) + c * c - 1.0


@dataclass(frozen=True)
class TradeoffPoint:
    eta_a: float
    eta_b: float
    fid_a: float
    fid_b: float
    qfi_a: float
    qfi_b: float
    sum_fid: float
    sum_qfi: float

    @classmethod
    def from_etas(cls, eta_a: float, eta_b: float, d: int) -> "TradeoffPoint":
        fa, fb = fidelity_scaled(eta_a, d), fidelity_scaled(eta_b, d)
        qa, qb = qfi_scaled(eta_a, d), qfi_scaled(eta_b, d)
        return cls(clamp_eta(eta_a), clamp_eta(eta_b), fa, fb, qa, qb, fa + fb, qa + qb)

    def as_row(self) -> tuple[float, ...]:
        return (self.eta_a, self.eta_b, self.fid_a, self.fid_b,
                self.qfi_a, self.qfi_b, self.sum_fid, self.sum_qfi)


# ---------------------------------------------------------- closed forms


def qfi_scaled(eta, d: int):
    """QFI of one phase of a scaled equatorial state.

    4 (d - 1) eta^2 / (2d + d (d - 2) eta); reduces to eta^2 for qubits.
    """
    d = _check_dim(d)
    eta = np.asarray(clamp_eta(eta))
    return _unwrap(4.0 * (d - 1) * eta * eta / (2.0 * d + d * (d - 2) * eta))


def qfi_pure(d: int) -> float:
    """QFI of a pure equatorial state, 4 (d - 1) / d^2."""
    d = _check_dim(d)
    return 4.0 * (d - 1) / (d * d)


def fidelity_scaled(eta, d: int):
    """<psi| rho |psi> for the scaled state: eta + (1 - eta) / d."""
    d = _check_dim(d)
    eta = np.asarray(clamp_eta(eta))
    return _unwrap(eta + (1.0 - eta) / d)


def eta_from_qfi(qfi, d: int):
    """Invert :func:`qfi_scaled` on [0, 1].

    Both terms in the numerator are non-negative, so the direct form of the
    positive root has no cancellation for any ``d``.
    """
    d = _check_dim(d)
    top = qfi_pure(d)
    f = np.asarray(qfi, dtype=float)
    if np.any(np.isnan(f)) or np.any(f < -ETA_SLACK) or np.any(f > top * (1 + ETA_SLACK) + ETA_SLACK):
        raise DomainError(f"QFI {qfi!r} outside [0, {top}] for d={d}")
    f = np.clip(f, 0.0, top)
    lin = d * (d - 2) * f
    eta = (lin + np.sqrt(lin * lin + 32.0 * d * (d - 1) * f)) / (8.0 * (d - 1))
    return _unwrap(np.clip(eta, 0.0, 1.0))


def qfi_sum(point: TradeoffPoint) -> float:
    return point.qfi_a + point.qfi_b


def fid_sum(point: TradeoffPoint) -> float:
    return point.fid_a + point.fid_b


def symmetric_uqcm_eta(d: int) -> float:
    """Shrinking factor of the symmetric UQCM, (d + 2) / (2d + 2)."""
    d = _check_dim(d)
    return (d + 2) / (2.0 * d + 2.0)


def symmetric_pqcm_eta(d: int) -> float:
    """Shrinking factor of the symmetric PQCM frontier point.

    Maximum over a = b of (d - 2) a^2 + 2a sqrt(1 - 2(d - 1) a^2), which is
    (d - 2 + sqrt(d^2 + 4d - 4)) / (4 (d - 1)).
    """
    d = _check_dim(d)
    return (d - 2 + math.sqrt(d * d + 4 * d - 4)) / (4.0 * (d - 1))
