"""Pick the compiled prime-field kernel when available, else the Python one.

Set ``QUIVSTAB_PURE=1`` to force the fallback.
"""
import os

from . import _ffkernel_py as pure

if os.environ.get("QUIVSTAB_PURE"):
    _impl = pure
else:
    try:
        from . import _ffkernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

BACKEND = "pure" if _impl is pure else "compiled"

rref_mod = _impl.rref_mod
reduce_mod = _impl.reduce_mod
maps_into_mod = _impl.maps_into_mod

__all__ = ["BACKEND", "rref_mod", "reduce_mod", "maps_into_mod", "pure"]
