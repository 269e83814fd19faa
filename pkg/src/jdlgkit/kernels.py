"""Kernel dispatch: the compiled extension when importable, numpy otherwise.

Set ``JDLGKIT_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _fallback

python_impl = _fallback

try:
    from . import _kernels as compiled_impl
except ImportError:  # extension not built
    compiled_impl = None

if compiled_impl is not None and os.environ.get("JDLGKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    _impl = compiled_impl
    BACKEND = "cython"
else:
    _impl = python_impl
    BACKEND = "python"

power_orbit = _impl.power_orbit
weighted_power_sum = _impl.weighted_power_sum
