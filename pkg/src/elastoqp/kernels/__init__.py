"""Kernel backend selection.

Imports the compiled Cython module when available, otherwise the NumPy
fallback.  Set ELASTOQP_FORCE_PYTHON=1 to skip the compiled module (used by
the benchmark and the backend-equivalence tests).
"""

import os

from . import pykernels

_forced = os.environ.get("ELASTOQP_FORCE_PYTHON", "").strip() not in ("", "0")

if not _forced:
    try:
        from . import _speedups as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = pykernels
        BACKEND = "python"
else:
    _impl = pykernels
    BACKEND = "python"

minimize_grid = _impl.minimize_grid
burgers_run = _impl.burgers_run
system_run = _impl.system_run


def backend_name() -> str:
    """Which kernel implementation is active: "compiled" or "python"."""
    return BACKEND
