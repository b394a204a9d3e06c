"""Pick the search kernels at import time.

The compiled extension is preferred; set ``REVSEQ_PURE_PYTHON=1`` to force
the NumPy implementation.
"""

import os

from . import _kernels_py

NAME = "numpy"
kernels = _kernels_py

if os.environ.get("REVSEQ_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        NAME = "cython"


def get(name=None):
    """Return a kernel module by name (``"cython"`` or ``"numpy"``); default is the active one."""
    if name is None:
        return kernels
    if name == "numpy":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")
