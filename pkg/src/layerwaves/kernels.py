"""Selects the series kernel backend at import time.

The compiled Cython extension is preferred; the numpy implementation is
the fallback.  Set LAYERWAVES_PURE_PYTHON=1 to force the fallback (used
by the benchmark and the backend-agreement tests).
"""

import os

from . import _kernels_py

if os.environ.get("LAYERWAVES_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl
    except ImportError:
        _impl = _kernels_py

trig_product = _impl.trig_product


def backend():
    """Name of the active kernel implementation ('cython' or 'python')."""
    return _impl.BACKEND
