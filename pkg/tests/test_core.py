import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qficlone.core import (
    DomainError,
    EquatorialState,
    Machine,
    MachineParams,
    ScaledOutputState,
    TradeoffPoint,
    clamp_eta,
    eta_from_qfi,
    fid_sum,
    fidelity_scaled,
    qfi_pure,
    qfi_scaled,
    qfi_sum,
    symmetric_pqcm_eta,
    symmetric_uqcm_eta,
)

dims = st.integers(min_value=2, max_value=60)
etas = st.floats(min_value=0.0, max_value=1.0)


@pytest.mark.parametrize("eta, d, expected", [
    (1.0, 2, 1.0),
    (2 / 3, 2, 4 / 9),
    (1.0, 3, 8 / 9),
    (0.0, 7, 0.0),
])
def test_qfi_scaled_examples(eta, d, expected):
    assert qfi_scaled(eta, d) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("eta, d", [(-0.1, 2), (1.01, 3), (0.5, 1), (0.5, 2.5)])
def test_qfi_scaled_domain(eta, d):
    with pytest.raises(DomainError):
        qfi_scaled(eta, d)


def test_eta_round_off_is_clamped():
    assert clamp_eta(1 + 5e-13) == 1.0
    assert clamp_eta(-5e-13) == 0.0


@pytest.mark.parametrize("d", range(2, 41))
def test_qfi_strictly_increasing(d):
    vals = qfi_scaled(np.linspace(0, 1, 1000), d)
    assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("d", [2, 3, 5, 18, 19, 40, 1000])
def test_pure_state_limit(d):
    assert qfi_scaled(1.0, d) == pytest.approx(4 * (d - 1) / d**2, rel=1e-15)
    assert qfi_pure(d) == 4 * (d - 1) / d**2


@given(etas)
def test_qubit_qfi_is_eta_squared(eta):
    assert qfi_scaled(eta, 2) == pytest.approx(eta * eta, abs=1e-16)


def test_fidelity_examples():
    b = 0.37
    assert fidelity_scaled(1 - b * b, 2) == pytest.approx(1 - b * b / 2, abs=1e-15)
    assert fidelity_scaled(0.0, 4) == 0.25
    assert fidelity_scaled(1.0, 9) == 1.0


@given(etas, dims)
def test_fidelity_is_linear(eta, d):
    assert fidelity_scaled(eta, d) - 1 / d == pytest.approx(eta * (d - 1) / d, abs=1e-15)


def test_eta_from_qfi_examples():
    assert eta_from_qfi(0.25, 2) == pytest.approx(0.5, abs=1e-15)
    assert eta_from_qfi(0.0, 5) == 0.0


@pytest.mark.parametrize("d", range(2, 13))
def test_eta_round_trip_grid(d):
    grid = np.arange(1, 10) / 10
    assert np.allclose(eta_from_qfi(qfi_scaled(grid, d), d), grid, atol=1e-13, rtol=0)


@given(st.floats(min_value=0.0, max_value=1.0), dims)
def test_inverse_consistency(frac, d):
    f = frac * qfi_pure(d)
    assert abs(qfi_scaled(eta_from_qfi(f, d), d) - f) <= 1e-10


def test_eta_from_qfi_tiny_values_large_d():
    d = 10_000
    eta = 1e-9
    assert eta_from_qfi(qfi_scaled(eta, d), d) == pytest.approx(eta, rel=1e-9)


def test_eta_from_qfi_rejects_too_much_information():
    with pytest.raises(DomainError):
        eta_from_qfi(qfi_pure(3) * 1.01, 3)


def test_sums_on_reference_points():
    sym = TradeoffPoint.from_etas(2 / 3, 2 / 3, 2)
    assert qfi_sum(sym) == pytest.approx(8 / 9, abs=1e-15)
    assert qfi_sum(TradeoffPoint.from_etas(1.0, 0.0, 2)) == 1.0
    p = TradeoffPoint.from_etas(1 / math.sqrt(2), 1 / math.sqrt(2), 2)
    assert qfi_sum(p) == pytest.approx(1.0, abs=1e-15)
    assert fid_sum(sym) == sym.sum_fid


@given(etas, etas, dims)
def test_tradeoff_point_identities(ea, eb, d):
    p = TradeoffPoint.from_etas(ea, eb, d)
    assert p.sum_qfi == p.qfi_a + p.qfi_b
    assert p.sum_fid == p.fid_a + p.fid_b
    assert p.qfi_a == qfi_scaled(ea, d) and p.fid_b == fidelity_scaled(eb, d)
    assert 1 / d - 1e-15 <= p.fid_a <= 1 + 1e-15


def test_equatorial_state_validation():
    assert EquatorialState.uniform(4).d == 4
    with pytest.raises(DomainError):
        EquatorialState((0.3,))


def test_scaled_output_state():
    s = ScaledOutputState(3, 0.5, EquatorialState.uniform(3))
    assert s.qfi == qfi_scaled(0.5, 3)
    with pytest.raises(DomainError):
        ScaledOutputState(3, 0.5, EquatorialState.uniform(4))
    with pytest.raises(DomainError):
        ScaledOutputState(3, 1.5, EquatorialState.uniform(3))


def test_machine_params_normalization():
    s = 1 / math.sqrt(3)
    MachineParams(Machine.UQCM, 2, s, s)
    MachineParams("pqcm", 2, 0.5, 0.5, math.sqrt(0.5))
    with pytest.raises(DomainError):
        MachineParams(Machine.UQCM, 2, 0.6, 0.6)
    with pytest.raises(DomainError):
        MachineParams(Machine.PQCM, 3, 0.5, 0.5, 0.1)
    with pytest.raises(DomainError):
        Machine.parse("cloner")


def test_symmetric_points():
    assert symmetric_uqcm_eta(2) == pytest.approx(2 / 3)
    assert symmetric_uqcm_eta(10) == pytest.approx(12 / 22)
    assert symmetric_pqcm_eta(2) == pytest.approx(1 / math.sqrt(2), abs=1e-15)


@pytest.mark.parametrize("d", [2, 3, 7, 20, 30])
def test_symmetric_pqcm_matches_brute_force(d):
    # oracle: dense scan of the symmetric machine a = b
    a = np.linspace(0, 1 / math.sqrt(2 * (d - 1)), 2_000_001)
    vals = (d - 2) * a * a + 2 * a * np.sqrt(np.maximum(1 - 2 * (d - 1) * a * a, 0))
    assert symmetric_pqcm_eta(d) == pytest.approx(vals.max(), abs=1e-10)
