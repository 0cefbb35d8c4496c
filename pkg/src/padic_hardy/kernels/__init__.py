"""Float64 hot loops with a compiled and a pure-Python implementation.

The compiled module is used when it was built and ``PADIC_HARDY_PURE`` is
unset; ``BACKEND`` records the choice.
"""

import os

if os.environ.get("PADIC_HARDY_PURE"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        from . import _pykernels as _impl

BACKEND = "cython" if _impl.__name__.endswith("_ckernels") else "python"

hardy_recurrence = _impl.hardy_recurrence
suffix_sum = _impl.suffix_sum
weighted_power_sum = _impl.weighted_power_sum
cmo_window = _impl.cmo_window
toeplitz_apply = _impl.toeplitz_apply
power_iteration = _impl.power_iteration

__all__ = [
    "BACKEND",
    "hardy_recurrence",
    "suffix_sum",
    "weighted_power_sum",
    "cmo_window",
    "toeplitz_apply",
    "power_iteration",
]
