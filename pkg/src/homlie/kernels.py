"""Kernel backend selection.

Imports the compiled term-map kernels when the extension was built,
otherwise the pure-Python twin.  Set HOMLIE_PURE_PYTHON=1 to force the
fallback (used by the benchmark and the parity tests).
"""

import os

if os.environ.get("HOMLIE_PURE_PYTHON"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

poly_add = _impl.poly_add
poly_neg = _impl.poly_neg
poly_scale = _impl.poly_scale
poly_mul = _impl.poly_mul
poly_partial = _impl.poly_partial
poly_substitute = _impl.poly_substitute
