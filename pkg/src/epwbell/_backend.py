"""Select the Monte Carlo kernel at import.

The compiled extension is used when it was built; otherwise, or when
``EPWBELL_PURE_PYTHON=1`` is set, the numpy kernel is used.
"""

import os

from . import _mckernel_py as python_kernel

try:
    from . import _mckernel as compiled_kernel
except ImportError:  # extension not built
    compiled_kernel = None

if compiled_kernel is not None and os.environ.get("EPWBELL_PURE_PYTHON", "") != "1":
    kernel = compiled_kernel
    BACKEND = "compiled"
else:
    kernel = python_kernel
    BACKEND = "python"


def get_kernel(name=None):
    """Return the kernel module for ``"compiled"``, ``"python"`` or the default."""
    if name is None:
        return kernel
    if name == "python":
        return python_kernel
    if name == "compiled":
        if compiled_kernel is None:
            raise ImportError("compiled Monte Carlo kernel is not available")
        return compiled_kernel
    raise ValueError(f"unknown backend {name!r}")
