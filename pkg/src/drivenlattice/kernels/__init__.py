"""Bessel-array kernels with a compiled fast path.

The Miller-recurrence loops are the hot inner loop of every transport scan,
so they exist twice: a Cython extension (``_native``) and a NumPy fallback
(``_fallback``).  The extension is preferred when importable; set
``DRIVENLATTICE_KERNELS=python`` to force the fallback (used by the
benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("DRIVENLATTICE_KERNELS", "").lower() == "python":
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _native as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

jn_array = _impl.jn_array
jn_array_batch = _impl.jn_array_batch


def backend() -> str:
    """Which kernel implementation is active: 'cython' or 'python'."""
    return BACKEND
