"""Backend selection for the hot field kernel.

The compiled Cython kernel is preferred when built; the NumPy reference
implementation is the fallback. Set ``DOMEWAVE_PURE_PYTHON=1`` to force
the fallback (used by the benchmark and the backend-equivalence tests).
"""

import os

_force_pure = os.environ.get("DOMEWAVE_PURE_PYTHON", "") not in ("", "0")

if _force_pure:
    from ._reference import pressure_sum
    BACKEND = "python"
else:
    try:
        from ._field_kernel import pressure_sum
        BACKEND = "compiled"
    except ImportError:
        from ._reference import pressure_sum
        BACKEND = "python"

__all__ = ["pressure_sum", "BACKEND"]
