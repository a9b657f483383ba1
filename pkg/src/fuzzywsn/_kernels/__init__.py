"""Hot-loop kernels: k-means++ seeding, Lloyd iterations and batched fuzzy inference.

The compiled Cython module is used when it was built; otherwise the
pure-Python module with the same functions is used. Setting
``FUZZYWSN_PURE_PYTHON=1`` forces the fallback. Both produce identical
floats, so simulation output does not depend on the backend.
"""

import os

from . import _pykernels

try:
    if os.environ.get("FUZZYWSN_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

lloyd = _impl.lloyd
kmeans_pp = _impl.kmeans_pp
kmeans_restarts = _impl.kmeans_restarts
sse = _impl.sse
infer_batch = _impl.infer_batch


def backends():
    """Every importable kernel module, keyed by name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found


__all__ = ["BACKEND", "backends", "infer_batch", "kmeans_pp", "kmeans_restarts", "lloyd", "sse"]
