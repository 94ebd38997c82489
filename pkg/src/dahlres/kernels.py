"""Backend selection for the sampling kernel.

The compiled extension ``dahlres._ckernel`` is used when it was built;
otherwise, or when ``DAHLRES_PURE_PYTHON=1`` is set, the NumPy fallback in
``dahlres._pykernel`` is used.  Both expose ``sample(num, den, dm1, mu)``.
"""
import os

from . import _pykernel

BACKENDS = {"python": _pykernel}

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None
else:
    BACKENDS["cython"] = _ckernel

if os.environ.get("DAHLRES_PURE_PYTHON", "") not in ("", "0") or _ckernel is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

sample = BACKENDS[BACKEND].sample


def get(name=None):
    """Kernel module by name; ``None`` gives the active backend."""
    return BACKENDS[name or BACKEND]
