"""Kernel backend selection: the compiled extension when importable, else numpy.

``BACKEND`` is ``"cython"`` or ``"numpy"``. Setting HYBRID_COHERENCE_PURE=1
before import forces the numpy path.
"""
import os

from . import _pykernels

if os.environ.get("HYBRID_COHERENCE_PURE", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "numpy"

star_rk4 = _impl.star_rk4
telegraph_on_grid = _impl.telegraph_on_grid

__all__ = ["BACKEND", "star_rk4", "telegraph_on_grid"]
