"""Density-matrix verification path.

Nothing here calls the closed-form QFI.  States and cloner outputs are built
as explicit vectors and matrices; the QFI is obtained either from the
eigen-expansion in the analytic Gram-Schmidt basis or from a numerically
differentiated symmetric logarithmic derivative.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import DomainError, EquatorialState, Machine, MachineParams, clamp_eta

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
RANK_TOL = 1e-12
FD_STEP = 1e-5


class RankToleranceError(ArithmeticError):
    """The SLD is ill-defined: d(rho) has weight on the null space of rho."""


class ScaledFormError(ValueError):
    def __init__(self, residual: float, tol: float):
        super().__init__(f"matrix is {residual:.3e} away from the scaled form (tol {tol:.1e})")
        self.residual = residual


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise DomainError(f"density matrix has trace {np.trace(m).real:.15g}")
        if np.linalg.eigvalsh(m)[0] < -PSD_TOL:
            raise DomainError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", m)

    @property
    def d(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray  # columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


@dataclass(frozen=True)
class JointState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amps.size != int(np.prod(self.dims)):
            raise DomainError(f"{amps.size} amplitudes do not fit dims {self.dims}")
        if abs(np.linalg.norm(amps) - 1.0) > 1e-12:
            raise DomainError(f"joint state has norm {np.linalg.norm(amps):.15g}")
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        object.__setattr__(self, "amplitudes", amps)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)


# ---------------------------------------------------------------- states


def build_equatorial(state: EquatorialState) -> np.ndarray:
    return np.exp(1j * np.asarray(state.phases)) / np.sqrt(state.d)


def build_scaled_rho(state: EquatorialState, eta: float) -> DensityMatrix:
    eta = clamp_eta(eta)
    psi = build_equatorial(state)
    d = state.d
    return DensityMatrix(eta * np.outer(psi, psi.conj()) + (1.0 - eta) / d * np.eye(d))


def _phi(theta: np.ndarray, n: int) -> np.ndarray:
    """Seed vector orthogonal to |psi>: (-exp(-i(theta_n - theta_0)) |0> + |n>) / sqrt(2)."""
    v = np.zeros(theta.size, dtype=complex)
    v[0] = -np.exp(-1j * (theta[n] - theta[0]))
    v[n] = 1.0
    return v / np.sqrt(2.0)


def _dphi(theta: np.ndarray, n: int, k: int) -> np.ndarray:
    v = np.zeros(theta.size, dtype=complex)
    v[0] = 1j * np.exp(-1j * (theta[n] - theta[0])) * ((k == n) - (k == 0))
    return v / np.sqrt(2.0)


def _gram_schmidt_raw(state: EquatorialState, k: int | None = None):
    """Un-normalized complement vectors and, if ``k`` is given, their d/d theta_k."""
    theta = np.asarray(state.phases)
    d = state.d
    vecs, dvecs = [], []
    for n in range(1, d):
        v = _phi(theta, n)
        dv = _dphi(theta, n, k) if k is not None else None
        for m in range(1, n):
            w = np.exp(1j * (theta[m] - theta[n]))
            v = v - w / n * _phi(theta, m)
            if k is not None:
                dw = 1j * ((k == m) - (k == n)) * w
                dv = dv - (dw * _phi(theta, m) + w * _dphi(theta, m, k)) / n
        vecs.append(v)
        dvecs.append(dv)
    return vecs, dvecs


def gram_schmidt_complement(state: EquatorialState, return_norms: bool = False):
    """Orthonormal basis of the complement of |psi>, as a (d, d-1) array.

    Seeds are orthogonalized in closed form; the pre-normalization squared
    norms are (n + 1) / (2n), returned alongside when ``return_norms``.
    """
    vecs, _ = _gram_schmidt_raw(state)
    norms = np.array([np.vdot(v, v).real for v in vecs])
    n = np.arange(1, state.d)
    basis = np.column_stack([v * np.sqrt(2 * i / (i + 1)) for v, i in zip(vecs, n)])
    return (basis, norms) if return_norms else basis


def scaled_eigensystem(state: EquatorialState, eta: float) -> EigenSystem:
    """Analytic spectrum of the scaled state: one large eigenvalue and a (d-1)-fold one."""
    eta = clamp_eta(eta)
    d = state.d
    values = np.array([((d - 1) * eta + 1) / d] + [(1 - eta) / d] * (d - 1))
    vectors = np.column_stack([build_equatorial(state), gram_schmidt_complement(state)])
    return EigenSystem(values, vectors)


# ------------------------------------------------------------------- QFI


def qfi_eq2_terms(state: EquatorialState, eta: float, k: int) -> tuple[float, float, float]:
    """Classical, pure-state and mixing terms of the eigen-expansion QFI for theta_k.

    The eigenvalues do not depend on the phases, so the classical term is
    exactly zero.
    """
    d = state.d
    if not 0 <= k < d:
        raise DomainError(f"phase index {k} out of range for d={d}")
    eig = scaled_eigensystem(state, eta)
    lam = eig.values
    theta = np.asarray(state.phases)

    psi = build_equatorial(state)
    dpsi = np.zeros(d, dtype=complex)
    dpsi[k] = 1j * np.exp(1j * theta[k]) / np.sqrt(d)
    raw, draw = _gram_schmidt_raw(state, k)
    scale = [np.sqrt(2 * n / (n + 1)) for n in range(1, d)]
    vecs = [psi] + [s * v for s, v in zip(scale, raw)]
    dvecs = [dpsi] + [s * v for s, v in zip(scale, draw)]

    d_lam = np.zeros(d)
    classical = sum(dl * dl / l for dl, l in zip(d_lam, lam) if l > 0)

    pure = 0.0
    for n in range(d):
        if lam[n] <= 0:
            continue
        overlap = np.vdot(vecs[n], dvecs[n])
        pure += lam[n] * 4.0 * (np.vdot(dvecs[n], dvecs[n]).real - abs(overlap) ** 2)

    mixing = 0.0
    for n in range(d):
        for m in range(d):
            if n == m or lam[n] + lam[m] <= 0:
                continue
            mixing += 8.0 * lam[n] * lam[m] / (lam[n] + lam[m]) * abs(np.vdot(vecs[n], dvecs[m])) ** 2
    return float(classical), float(pure), float(mixing)


def qfi_eq2(state: EquatorialState, eta: float, k: int) -> float:
    classical, pure, mixing = qfi_eq2_terms(state, eta, k)
    return classical + pure - mixing


def eigensystem(rho: DensityMatrix | np.ndarray) -> EigenSystem:
    """General Hermitian eigendecomposition, eigenvalues in descending order."""
    m = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    w, v = np.linalg.eigh(m)
    return EigenSystem(w[::-1].copy(), v[:, ::-1].copy())


def sld_qfi(rho: np.ndarray, drho: np.ndarray, rank_tol: float = RANK_TOL, null_tol: float = 1e-6) -> float:
    """Tr(rho L^2) with L the symmetric logarithmic derivative of ``drho``."""
    eig = eigensystem(rho)
    lam, vec = eig.values, eig.vectors
    dm = vec.conj().T @ drho @ vec
    total = lam[:, None] + lam[None, :]
    keep = total > rank_tol
    scale = max(np.max(np.abs(dm)), 1.0)
    if np.any(np.abs(dm[~keep]) > null_tol * scale):
        raise RankToleranceError("derivative of rho has support on the null space of rho")
    L = np.zeros_like(dm)
    L[keep] = 2.0 * dm[keep] / total[keep]
    return float(np.real(np.sum(lam[:, None] * L * L.T)))


def qfi_sld_fd(
    rho_at: Callable[[float], DensityMatrix | np.ndarray],
    theta0: float,
    delta: float = FD_STEP,
    rank_tol: float = RANK_TOL,
) -> float:
    """QFI from a central-difference derivative of ``rho_at`` around ``theta0``."""
    if not delta > 0:
        raise DomainError("finite-difference step must be positive")

    def mat(t):
        r = rho_at(t)
        return r.entries if isinstance(r, DensityMatrix) else np.asarray(r, dtype=complex)

    drho = (mat(theta0 + delta) - mat(theta0 - delta)) / (2.0 * delta)
    return sld_qfi(mat(theta0), drho, rank_tol)


def scaled_rho_family(state: EquatorialState, eta: float, k: int) -> Callable[[float], DensityMatrix]:
    """theta -> scaled state with phase ``k`` replaced by theta."""
    return lambda theta: build_scaled_rho(state.with_phase(k, theta), eta)


# --------------------------------------------------------------- cloners


def _check_params(params: MachineParams, kind: Machine, state: EquatorialState):
    if params.kind is not kind:
        raise DomainError(f"expected {kind.name} parameters, got {params.kind.name}")
    if params.d != state.d:
        raise DomainError(f"machine has d={params.d}, state has d={state.d}")
    if abs(params.normalization_residual()) > 1e-10:
        raise DomainError("machine normalization violated")


def clone_uqcm(state: EquatorialState, params: MachineParams) -> JointState:
    """a |psi>_A |Phi+>_BR + b |psi>_B |Phi+>_AR, subsystems ordered (A, B, R)."""
    _check_params(params, Machine.UQCM, state)
    d = state.d
    psi = build_equatorial(state)
    bell = np.eye(d) / np.sqrt(d)  # |Phi+> as a (first, second) amplitude table
    t = params.a * np.einsum("i,jk->ijk", psi, bell) + params.b * np.einsum("j,ik->ijk", psi, bell)
    return JointState((d, d, d), t)


def clone_pqcm(state: EquatorialState, params: MachineParams) -> JointState:
    """Phase-covariant cloner applied by linearity, ancilla |Sigma_j> = |j>.

    |i>_A -> c |i>|i>|i> + sum_{j != i} (a |i>|j> + b |j>|i>) |j>.
    """
    _check_params(params, Machine.PQCM, state)
    d = state.d
    psi = build_equatorial(state)
    a, b, c = params.a, params.b, params.c
    t = np.zeros((d, d, d), dtype=complex)
    for i in range(d):
        t[i, i, i] += c * psi[i]
        for j in range(d):
            if j != i:
                t[i, j, j] += a * psi[i]
                t[j, i, j] += b * psi[i]
    return JointState((d, d, d), t)


def partial_trace(joint: JointState, keep: int) -> DensityMatrix:
    """Reduced state of subsystem ``keep``."""
    n = len(joint.dims)
    if not 0 <= keep < n:
        raise IndexError(f"subsystem {keep} out of range for {n} subsystems")
    t = np.moveaxis(joint.tensor(), keep, 0).reshape(joint.dims[keep], -1)
    rho = t @ t.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def extract_eta(rho: DensityMatrix, state: EquatorialState, tol: float = 1e-8) -> tuple[float, float]:
    """Shrinking factor of ``rho`` read off from its fidelity, with the scaled-form residual.

    Raises :class:`ScaledFormError` if ``rho`` is not of the scaled form
    within ``tol`` (spectral norm).
    """
    d = state.d
    psi = build_equatorial(state)
    fid = np.vdot(psi, rho.entries @ psi).real
    eta = (d * fid - 1.0) / (d - 1)
    model = eta * np.outer(psi, psi.conj()) + (1.0 - eta) / d * np.eye(d)
    residual = float(np.linalg.norm(rho.entries - model, 2))
    if residual > tol:
        raise ScaledFormError(residual, tol)
    return float(eta), residual


def scaled_residual(rho: DensityMatrix, state: EquatorialState, eta: float) -> float:
    """Spectral-norm distance from ``rho`` to the scaled state with factor ``eta``."""
    return float(np.linalg.norm(rho.entries - build_scaled_rho(state, eta).entries, 2))


def random_equatorial_states(d: int, count: int, seed: int = 0) -> Sequence[EquatorialState]:
    rng = np.random.default_rng(seed)
    return [EquatorialState.random(d, rng) for _ in range(count)]
