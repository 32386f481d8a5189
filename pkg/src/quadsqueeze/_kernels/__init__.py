"""Hot loops: Hermite recurrences and the squeeze double sum.

The compiled extension is used when it imports; otherwise the NumPy
fallback is selected. Set ``QUADSQUEEZE_PURE_PYTHON=1`` to force the
fallback.
"""
import os

if os.environ.get("QUADSQUEEZE_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        from . import _pykernels as _impl

BACKEND = "compiled" if _impl.__name__.endswith("_ckernels") else "python"

hermite_poly = _impl.hermite_poly
hermite_functions = _impl.hermite_functions
hermite_function = _impl.hermite_function
hermite_series = _impl.hermite_series
squeeze_series = _impl.squeeze_series

__all__ = [
    "BACKEND",
    "hermite_poly",
    "hermite_functions",
    "hermite_function",
    "hermite_series",
    "squeeze_series",
]
