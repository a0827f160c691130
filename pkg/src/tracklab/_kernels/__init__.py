"""Kernel backend selection.

The compiled Cython core (``tracklab._kernels._core``) is preferred; the
vectorized NumPy implementation in ``pure.py`` is the fallback with
identical contracts. Set ``TRACKLAB_BACKEND=pure`` (or ``cython``) before
import to force a backend.
"""

import os

from . import pure as _pure_impl

_requested = os.environ.get("TRACKLAB_BACKEND", "").strip().lower()
if _requested not in ("", "pure", "cython"):
    raise ImportError(
        f"TRACKLAB_BACKEND={_requested!r} not recognized; use 'pure' or 'cython'"
    )

if _requested == "pure":
    _impl = _pure_impl
    BACKEND = "pure"
else:
    try:
        from . import _core as _compiled_impl
        _impl = _compiled_impl
        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _pure_impl
        BACKEND = "pure"

semilinear_newton = _impl.semilinear_newton
tridiag_lcp_psor = _impl.tridiag_lcp_psor


def available_backends():
    """Map backend name -> kernel module, for tests and benchmarks."""
    backends = {"pure": _pure_impl}
    try:
        from . import _core as compiled
        backends["cython"] = compiled
    except ImportError:
        pass
    return backends
