"""Kernel backend selection.

The compiled Cython module is used when it was built and importable; set
``STEGOSINK_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _fallback

compiled = None
if not os.environ.get("STEGOSINK_PURE_PYTHON"):
    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else _fallback
BACKEND = "cython" if compiled is not None else "numpy"

embed_frame = _impl.embed_frame
extract_frame = _impl.extract_frame
sum_sq_diff = _impl.sum_sq_diff
dot = _impl.dot
channel_moments = _impl.channel_moments


def backends():
    """Available implementations by name, for parity tests and benchmarks."""
    found = {"numpy": _fallback}
    if compiled is not None:
        found["cython"] = compiled
    else:
        try:
            from . import _kernels
        except ImportError:
            pass
        else:
            found["cython"] = _kernels
    return found
