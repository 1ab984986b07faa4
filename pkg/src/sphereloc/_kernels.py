"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise, or
when ``SPHERELOC_PURE_PYTHON`` is set to a non-empty value, the numpy
implementation in ``_pykernels`` is used.  Both expose the same functions.
"""
import os

from . import _pykernels

PURE_ENV = "SPHERELOC_PURE_PYTHON"

_compiled = None
if not os.environ.get(PURE_ENV):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

_impl = _compiled if _compiled is not None else _pykernels

BACKEND = _impl.BACKEND
gaussian_radial = _impl.gaussian_radial
cone_integral = _impl.cone_integral

KIND_FREE = _pykernels.KIND_FREE
KIND_SLAB = _pykernels.KIND_SLAB
KIND_DISK = _pykernels.KIND_DISK
WEIGHT_GAUSSIAN = _pykernels.WEIGHT_GAUSSIAN
WEIGHT_POWER = _pykernels.WEIGHT_POWER


def available_backends():
    """Mapping of backend name to kernel module, compiled first if present."""
    out = {}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    out["python"] = _pykernels
    return out
