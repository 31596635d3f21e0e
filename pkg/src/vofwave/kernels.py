"""Backend selection for the stepper's inner loops.

The compiled extension ``vofwave._ckernels`` is used when it was built;
otherwise the NumPy fallback is loaded. Set ``VOFWAVE_PURE_PYTHON=1`` to force
the fallback.
"""
import importlib
import os

__all__ = ["BACKEND", "available_backends", "get_backend",
           "l1_weights", "history_sum", "ldl_factor", "ldl_solve"]

_MODULES = {"cython": "vofwave._ckernels", "python": "vofwave._kernels_py"}


def get_backend(name):
    """Return the kernel module for ``name`` ('cython' or 'python')."""
    try:
        return importlib.import_module(_MODULES[name])
    except KeyError:
        raise ValueError(f"unknown kernel backend {name!r}") from None


def available_backends():
    names = []
    for name in _MODULES:
        try:
            get_backend(name)
        except ImportError:
            continue
        names.append(name)
    return names


if os.environ.get("VOFWAVE_PURE_PYTHON", "").strip() not in ("", "0"):
    BACKEND = "python"
    _impl = get_backend("python")
else:
    try:
        _impl = get_backend("cython")
        BACKEND = "cython"
    except ImportError:
        _impl = get_backend("python")
        BACKEND = "python"

l1_weights = _impl.l1_weights
history_sum = _impl.history_sum
ldl_factor = _impl.ldl_factor
ldl_solve = _impl.ldl_solve
