"""Select the numeric kernel backend at import time.

The compiled extension is preferred; ``BESSELINE_PURE=1`` forces the
pure-Python fallback (used by the benchmark and the parity tests).
"""
import os

if os.environ.get("BESSELINE_PURE") == "1":
    from . import _fallback as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as kernels

        BACKEND = "python"

EPS = 2.220446049250313e-16

__all__ = ["kernels", "BACKEND", "EPS"]
