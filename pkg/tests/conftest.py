import numpy as np
import pytest

from qficlone import _fallback

try:
    from qficlone import _kernels
except ImportError:  # extension not built
    _kernels = None

BACKENDS = [pytest.param(_fallback, id="numpy")]
if _kernels is not None:
    BACKENDS.append(pytest.param(_kernels, id="cython"))


@pytest.fixture
def rng():
    return np.random.default_rng(20141)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
