"""Kernel backend selection.

Imports the compiled extension when it was built, otherwise the numpy
fallback.  Set MKTINFO_PURE_PYTHON=1 to force the fallback (useful for
benchmarking and debugging).
"""

import os

if os.environ.get("MKTINFO_PURE_PYTHON"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

word_counts = _impl.word_counts
ar_lagged_recursion = _impl.ar_lagged_recursion


def backend_name() -> str:
    """Which kernel implementation is active: 'compiled' or 'python'."""
    return BACKEND
