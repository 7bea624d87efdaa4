"""Kernel backend selection.

The hot field kernels exist twice: a compiled Cython extension
(``llgfd._kernels``) and a pure-numpy reference lane (``llgfd._kernels_np``).
The compiled lane is picked at import when available; set
``LLGFD_BACKEND=numpy`` or ``LLGFD_BACKEND=cython`` to force one.
"""

import os

from llgfd import _kernels_np


def _select():
    forced = os.environ.get("LLGFD_BACKEND", "").strip().lower()
    if forced == "numpy":
        return _kernels_np
    try:
        from llgfd import _kernels

        if not hasattr(_kernels, "assemble_rhs"):
            raise ImportError("stale or incomplete compiled extension")
    except ImportError:
        if forced == "cython":
            raise ImportError(
                "LLGFD_BACKEND=cython but the compiled extension is not "
                "available; build it with `pip install -e .`"
            )
        return _kernels_np
    return _kernels


impl = _select()


def name():
    return impl.NAME


def use(backend):
    """Swap the active kernel lane ('numpy' or 'cython').

    Used by the parity tests and the backend benchmark; not thread-safe.
    """
    global impl
    if backend == "numpy":
        impl = _kernels_np
    elif backend == "cython":
        from llgfd import _kernels

        impl = _kernels
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return impl
