"""Backend selection for the hot PQCM frontier kernel.

The compiled Cython module is used when it was built; otherwise the numpy
implementation in ``_fallback`` is used.  ``BACKEND`` names the active one.
"""
try:
    from ._kernels import pqcm_eta_b, pqcm_frontier

    BACKEND = "cython"
except ImportError:  # extension not built
    from ._fallback import pqcm_eta_b, pqcm_frontier

    BACKEND = "numpy"

from ._fallback import feasible_interval

__all__ = ["BACKEND", "feasible_interval", "pqcm_eta_b", "pqcm_frontier"]
