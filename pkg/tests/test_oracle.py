import math

import numpy as np
import pytest

from qficlone.core import DomainError, EquatorialState, Machine, MachineParams, qfi_scaled
from qficlone.machines import pqcm_d_shrink, uqcm_params_from_eta, uqcm_shrink
from qficlone.oracle import (
    DensityMatrix,
    JointState,
    RankToleranceError,
    ScaledFormError,
    build_equatorial,
    build_scaled_rho,
    clone_pqcm,
    clone_uqcm,
    eigensystem,
    extract_eta,
    gram_schmidt_complement,
    partial_trace,
    qfi_eq2,
    qfi_eq2_terms,
    qfi_sld_fd,
    scaled_eigensystem,
    scaled_residual,
    scaled_rho_family,
    sld_qfi,
)
from qficlone.verify import random_pqcm_params, random_uqcm_params


def test_build_equatorial():
    theta = 0.7
    psi = build_equatorial(EquatorialState((0.0, theta)))
    assert np.allclose(psi, np.array([1, np.exp(1j * theta)]) / math.sqrt(2))
    assert np.allclose(build_equatorial(EquatorialState.uniform(4)), 0.5)


def test_equatorial_norm(rng):
    psi = build_equatorial(EquatorialState.random(9, rng))
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-15)


def test_build_scaled_rho(rng):
    s = EquatorialState.random(3, rng)
    assert np.allclose(build_scaled_rho(s, 0.0).entries, np.eye(3) / 3)
    pure = build_scaled_rho(s, 1.0).entries
    assert np.linalg.matrix_rank(pure, tol=1e-10) == 1
    lam = np.sort(np.linalg.eigvalsh(build_scaled_rho(s, 0.5).entries))[::-1]
    assert np.allclose(lam, [2 / 3, 1 / 6, 1 / 6], atol=1e-14)
    with pytest.raises(DomainError):
        build_scaled_rho(s, 1.5)


def test_density_matrix_validation():
    with pytest.raises(DomainError):
        DensityMatrix(np.eye(2))
    with pytest.raises(DomainError):
        DensityMatrix(np.array([[1.0, 0.5j], [0.5j, 0.0]]))
    with pytest.raises(DomainError):
        DensityMatrix(np.diag([1.5, -0.5]))


def test_gram_schmidt_qubit():
    theta = 1.1
    s = EquatorialState((0.0, theta))
    v = gram_schmidt_complement(s)[:, 0]
    ref = np.array([-np.exp(-1j * theta), 1]) / math.sqrt(2)
    assert abs(abs(np.vdot(ref, v)) - 1) < 1e-14


@pytest.mark.parametrize("d", [3, 5, 10])
def test_gram_schmidt_orthonormal_complement(rng, d):
    s = EquatorialState.random(d, rng)
    basis, norms = gram_schmidt_complement(s, return_norms=True)
    n = np.arange(1, d)
    assert np.allclose(norms, (n + 1) / (2 * n), atol=1e-12, rtol=0)
    full = np.column_stack([build_equatorial(s), basis])
    assert np.max(np.abs(full.conj().T @ full - np.eye(d))) <= 1e-12


def test_scaled_eigensystem_reconstructs(rng):
    s = EquatorialState.random(6, rng)
    eig = scaled_eigensystem(s, 0.3)
    assert np.linalg.norm(eig.reconstruct() - build_scaled_rho(s, 0.3).entries, 2) <= 1e-10


def test_general_eigensystem_descending(rng):
    s = EquatorialState.random(4, rng)
    eig = eigensystem(build_scaled_rho(s, 0.6))
    assert np.all(np.diff(eig.values) <= 1e-15)
    assert np.max(np.abs(eig.vectors.conj().T @ eig.vectors - np.eye(4))) <= 1e-12


def test_qfi_eq2_examples(rng):
    assert qfi_eq2(EquatorialState.random(2, rng), 1.0, 1) == pytest.approx(1.0, abs=1e-14)
    s = EquatorialState.random(3, rng)
    vals = [qfi_eq2(s, 0.7, k) for k in range(3)]
    assert max(vals) - min(vals) <= 1e-14
    s6 = EquatorialState.random(6, rng)
    for eta in np.linspace(0, 1, 11):
        assert qfi_eq2(s6, eta, 0) == pytest.approx(qfi_scaled(eta, 6), abs=1e-12)


def test_qfi_eq2_classical_term_vanishes(rng):
    classical, pure, mixing = qfi_eq2_terms(EquatorialState.random(5, rng), 0.4, 2)
    assert classical == 0.0
    assert pure > mixing > 0


def test_qfi_eq2_bad_index(rng):
    with pytest.raises(DomainError):
        qfi_eq2(EquatorialState.random(3, rng), 0.5, 3)


def test_qfi_sld_examples(rng):
    s2 = EquatorialState.random(2, rng)
    assert qfi_sld_fd(scaled_rho_family(s2, 0.5, 1), s2.phases[1]) == pytest.approx(0.25, abs=1e-6)
    s4 = EquatorialState.random(4, rng)
    got = qfi_sld_fd(scaled_rho_family(s4, 0.8, 2), s4.phases[2], delta=1e-5)
    assert got == pytest.approx(qfi_scaled(0.8, 4), abs=1e-6)
    assert qfi_sld_fd(scaled_rho_family(s4, 0.0, 0), 0.3) == pytest.approx(0.0, abs=1e-9)


def test_sld_on_pure_states(rng):
    s = EquatorialState.random(5, rng)
    got = qfi_sld_fd(scaled_rho_family(s, 1.0, 3), s.phases[3])
    assert got == pytest.approx(4 * 4 / 25, abs=1e-6)


def test_sld_rank_violation():
    rho = np.diag([1.0, 0.0]).astype(complex)
    drho = np.diag([0.0, 1.0]).astype(complex)
    with pytest.raises(RankToleranceError):
        sld_qfi(rho, drho)


def test_qfi_sld_rejects_bad_step(rng):
    with pytest.raises(DomainError):
        qfi_sld_fd(scaled_rho_family(EquatorialState.uniform(2), 0.5, 0), 0.0, delta=0.0)


def test_partial_trace_product_state(rng):
    u, v, w = (x / np.linalg.norm(x) for x in (rng.normal(size=2) + 1j * rng.normal(size=2),
                                                rng.normal(size=3) + 0j, rng.normal(size=2) + 0j))
    joint = JointState((2, 3, 2), np.einsum("i,j,k->ijk", u, v, w))
    assert np.allclose(partial_trace(joint, 0).entries, np.outer(u, u.conj()), atol=1e-14)
    assert np.allclose(partial_trace(joint, 1).entries, np.outer(v, v.conj()), atol=1e-14)


def test_partial_trace_bell_state():
    joint = JointState((2, 2), np.array([1, 0, 0, 1]) / math.sqrt(2))
    for keep in (0, 1):
        assert np.allclose(partial_trace(joint, keep).entries, np.eye(2) / 2)
    with pytest.raises(IndexError):
        partial_trace(joint, 2)


def test_joint_state_norm():
    with pytest.raises(DomainError):
        JointState((2, 2), np.ones(4))


def test_clone_uqcm_symmetric_qubit(rng):
    s = EquatorialState.random(2, rng)
    a = 1 / math.sqrt(3)
    joint = clone_uqcm(s, MachineParams(Machine.UQCM, 2, a, a))
    for keep in (0, 1):
        eta, _ = extract_eta(partial_trace(joint, keep), s)
        assert eta == pytest.approx(2 / 3, abs=1e-14)


def test_clone_uqcm_identity_machine(rng):
    s = EquatorialState.random(5, rng)
    joint = clone_uqcm(s, MachineParams(Machine.UQCM, 5, 1.0, 0.0))
    psi = build_equatorial(s)
    assert np.allclose(partial_trace(joint, 0).entries, np.outer(psi, psi.conj()), atol=1e-14)


def test_clone_uqcm_frontier_d3(rng):
    s = EquatorialState.random(3, rng)
    p = uqcm_params_from_eta(0.45, 3)
    joint = clone_uqcm(s, p)
    assert scaled_residual(partial_trace(joint, 0), s, 1 - p.b**2) <= 1e-10
    assert scaled_residual(partial_trace(joint, 1), s, 1 - p.a**2) <= 1e-10


def test_clone_pqcm_qubit(rng):
    s = EquatorialState.random(2, rng)
    a, b = 0.4, 0.5
    c = math.sqrt(1 - a * a - b * b)
    joint = clone_pqcm(s, MachineParams(Machine.PQCM, 2, a, b, c))
    psi = build_equatorial(s)
    expect = 2 * a * c * np.outer(psi, psi.conj()) + (1 - 2 * a * c) / 2 * np.eye(2)
    assert np.allclose(partial_trace(joint, 0).entries, expect, atol=1e-14)


def test_clone_pqcm_symmetric_machine(rng):
    s = EquatorialState.random(4, rng)
    a = 0.3
    c = math.sqrt(1 - 3 * 2 * a * a)
    joint = clone_pqcm(s, MachineParams(Machine.PQCM, 4, a, a, c))
    assert np.allclose(partial_trace(joint, 0).entries, partial_trace(joint, 1).entries, atol=1e-14)


def test_clone_pqcm_random_d4(rng):
    for _ in range(5):
        s = EquatorialState.random(4, rng)
        p = random_pqcm_params(4, rng)
        eta_a, _ = extract_eta(partial_trace(clone_pqcm(s, p), 0), s)
        assert eta_a == pytest.approx(pqcm_d_shrink(p.a, p.b, 4)[0], abs=1e-10)


def test_clone_kind_mismatch(rng):
    s = EquatorialState.random(3, rng)
    with pytest.raises(DomainError):
        clone_pqcm(s, random_uqcm_params(3, rng))
    with pytest.raises(DomainError):
        clone_uqcm(EquatorialState.random(2, rng), random_uqcm_params(3, rng))


def test_extract_eta_round_trip(rng):
    s = EquatorialState.random(5, rng)
    eta, res = extract_eta(build_scaled_rho(s, 0.37), s)
    assert eta == pytest.approx(0.37, abs=1e-12)
    assert res <= 1e-14


def test_extract_eta_rejects_other_states(rng):
    s = EquatorialState.random(3, rng)
    other = build_scaled_rho(EquatorialState.random(3, rng), 0.8)
    with pytest.raises(ScaledFormError) as info:
        extract_eta(other, s)
    assert info.value.residual > 1e-8


def test_clone_pqcm_d3_against_shrink(rng):
    s = EquatorialState.random(3, rng)
    p = random_pqcm_params(3, rng)
    joint = clone_pqcm(s, p)
    got = (extract_eta(partial_trace(joint, 0), s)[0], extract_eta(partial_trace(joint, 1), s)[0])
    assert got == pytest.approx(pqcm_d_shrink(p.a, p.b, 3), abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_no_cloning_perfect_copy(rng, d):
    s = EquatorialState.random(d, rng)
    # perfect copy A: UQCM a = 1, b = 0
    joint = clone_uqcm(s, MachineParams(Machine.UQCM, d, 1.0, 0.0))
    ea, _ = extract_eta(partial_trace(joint, 0), s)
    eb, _ = extract_eta(partial_trace(joint, 1), s)
    assert ea == pytest.approx(1.0, abs=1e-12)
    assert eb <= 1e-9
    # perfect copy A: PQCM a = c = 1/sqrt(d), b = 0
    r = 1 / math.sqrt(d)
    joint = clone_pqcm(s, MachineParams(Machine.PQCM, d, r, 0.0, r))
    ea, _ = extract_eta(partial_trace(joint, 0), s)
    eb, _ = extract_eta(partial_trace(joint, 1), s)
    assert ea == pytest.approx(1.0, abs=1e-12)
    assert eb <= 1e-9


def test_uqcm_shrink_consistency_with_oracle(rng):
    s = EquatorialState.random(6, rng)
    p = random_uqcm_params(6, rng)
    joint = clone_uqcm(s, p)
    assert scaled_residual(partial_trace(joint, 0), s, uqcm_shrink(p.a, p.b, 6)[0]) <= 1e-10
