import numpy as np
import pytest

from tbpwalk import _kernels_py

try:
    from tbpwalk import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

KERNEL_MODULES = [m for m in (_kernels_py, _kernels_c) if m is not None]


@pytest.fixture(params=KERNEL_MODULES, ids=lambda m: m.BACKEND_NAME)
def kernels(request):
    """Run a test once per available compute backend."""
    return request.param


@pytest.fixture
def compiled_kernels():
    if _kernels_c is None:
        pytest.skip("compiled backend not built")
    return _kernels_c


def random_codes(rng, n):
    return rng.integers(0, 4, size=n).astype(np.uint8)
