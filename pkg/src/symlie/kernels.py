"""Kernel backend selection.

The compiled Cython kernels are used when the extension was built; otherwise
the pure-Python implementations are used.  Setting ``SYMLIE_KERNELS=python``
forces the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("SYMLIE_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

mul = _impl.mul
bracket = _impl.bracket
derive = _impl.derive
permute = _impl.permute
substitute = _impl.substitute
coproduct_defect = _impl.coproduct_defect
dynkin = _impl.dynkin

__all__ = [
    "BACKEND",
    "mul",
    "bracket",
    "derive",
    "permute",
    "substitute",
    "coproduct_defect",
    "dynkin",
]
