"""Evaluation kernels with a compiled fast path and a numpy fallback.

The compiled extension (canodual.kernels._native) is selected at import
time when present; set the environment variable CANODUAL_PURE_PYTHON to any
non-empty value to force the numpy reference implementation.  Both expose
the same functions over identical packed-array arguments, so everything
above this layer is backend-agnostic.
"""

import os

from . import reference

native = None
if not os.environ.get("CANODUAL_PURE_PYTHON"):
    try:
        from . import _native as native  # type: ignore[no-redef]
    except ImportError:
        native = None

_impl = native if native is not None else reference

quartic_measure = _impl.quartic_measure
quartic_value = _impl.quartic_value
quartic_value_grad = _impl.quartic_value_grad
lj_value = _impl.lj_value
lj_value_grad = _impl.lj_value_grad


def backend() -> str:
    """Name of the active kernel backend: 'native' or 'reference'."""
    return "native" if _impl is not reference else "reference"
