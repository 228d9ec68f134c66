"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
implementation. ``ARTERYFLOW_BACKEND=python`` forces the fallback and
``ARTERYFLOW_BACKEND=compiled`` makes a missing extension an error.
"""
import os
import warnings

from . import _kernels_py

try:
    from . import _kernels as _kernels_ext
except ImportError:  # extension not built
    _kernels_ext = None

BACKENDS = {"python": _kernels_py}
if _kernels_ext is not None:
    BACKENDS["compiled"] = _kernels_ext


def get_backend(name=None):
    """Return the kernel module for ``name`` (``None`` selects the default)."""
    if name is None:
        name = DEFAULT
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


def _default():
    requested = os.environ.get("ARTERYFLOW_BACKEND", "").strip().lower()
    if requested in ("python", "compiled"):
        if requested not in BACKENDS:
            raise ImportError("ARTERYFLOW_BACKEND=compiled but the extension is not built")
        return requested
    if requested:
        warnings.warn(f"ignoring unknown ARTERYFLOW_BACKEND={requested!r}")
    return "compiled" if "compiled" in BACKENDS else "python"


DEFAULT = _default()
