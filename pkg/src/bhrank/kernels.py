"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it was built; otherwise the
numpy versions in ``_kernels_py`` take over. Set ``BHRANK_PURE_PYTHON=1`` to
force the fallback (e.g. to compare the two).
"""
import os

from bhrank import _kernels_py

try:
    if os.environ.get("BHRANK_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from bhrank import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _kernels_py

csc_rmatvec = _impl.csc_rmatvec
csc_matvec = _impl.csc_matvec
pagerank_power = _impl.pagerank_power
blackhole_power = _impl.blackhole_power


def available_backends():
    """Map backend name to kernel module, for tests and benchmarks."""
    found = {"python": _kernels_py}
    if _compiled is not None:
        found["cython"] = _compiled
    else:
        try:
            from bhrank import _kernels
        except ImportError:
            pass
        else:
            found["cython"] = _kernels
    return found
