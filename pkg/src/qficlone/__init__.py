"""Quantum Fisher information distribution in asymmetric qudit cloning machines."""
from .core import (
    DomainError,
    EquatorialState,
    Machine,
    MachineParams,
    ScaledOutputState,
    TradeoffPoint,
    eta_from_qfi,
    fid_sum,
    fidelity_scaled,
    qfi_scaled,
    qfi_sum,
)
from .kernels import BACKEND
from .machines import (
    frontier,
    pqcm2_optimal,
    pqcm_d_optimal,
    pqcm_d_shrink,
    pqcm_d_tradeoff,
    uqcm_boundary,
    uqcm_params_from_eta,
    uqcm_shrink,
)
from .scan import bifurcation_scan, find_extrema, fidelity_optimum_check, qfi_sum_curve

__version__ = "0.1.0"
