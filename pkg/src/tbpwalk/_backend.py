"""Kernel backend selection.

Prefers the compiled extension, falls back to the pure NumPy/Python module.
Set TBP_WALK_PURE=1 to force the fallback (used by the benchmark and the
backend-equivalence tests).  Both backends are bit-identical; only speed
differs.
"""

import os

from . import _kernels_py

if os.environ.get("TBP_WALK_PURE", "") not in ("", "0"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND_NAME


def available_backends():
    """Names of the kernel backends importable in this environment."""
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        pass
    else:
        names.insert(0, "compiled")
    return names
