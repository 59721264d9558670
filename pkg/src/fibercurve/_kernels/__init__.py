"""Kernel backend selection.

The compiled Cython kernels are used when the extension built; otherwise the
pure-Python twins take over.  Set FIBERCURVE_PURE=1 in the environment before
import to force the pure backend (used by the benchmark and by tests that
compare the two).
"""

from __future__ import annotations

import os

from . import pure as _pure

CASE_NO_CRITICAL = _pure.CASE_NO_CRITICAL
CASE_UNIQUE_MIN = _pure.CASE_UNIQUE_MIN
CASE_UNIQUE_MAX = _pure.CASE_UNIQUE_MAX
CASE_TWO_ROOTS = _pure.CASE_TWO_ROOTS
CASE_DEGENERATE = _pure.CASE_DEGENERATE

BACKEND = "pure"
_impl = _pure
if not os.environ.get("FIBERCURVE_PURE"):
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure

fiber_value = _impl.fiber_value
fiber_d1 = _impl.fiber_d1
fiber_d2 = _impl.fiber_d2
g_value = _impl.g_value
g_deriv = _impl.g_deriv
extremal_pair = _impl.extremal_pair
zero_level_pair = _impl.zero_level_pair
classify = _impl.classify


def available_backends() -> dict:
    """Importable kernel modules keyed by backend name."""
    backends = {"pure": _pure}
    try:
        from . import _speedups

        backends["compiled"] = _speedups
    except ImportError:
        pass
    return backends
