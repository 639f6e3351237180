"""Hot inner loops, compiled when the extension is built.

Set ``TEMPERED_PURE_PYTHON=1`` to force the reference implementation.
``BACKEND`` names the implementation actually in use.
"""
import os

from . import _pykernels

if os.environ.get("TEMPERED_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

int_valuation = _impl.int_valuation
convolve = _impl.convolve
sparse_rank = _impl.sparse_rank
solve_mod_p = _impl.solve_mod_p

__all__ = ["BACKEND", "int_valuation", "convolve", "sparse_rank", "solve_mod_p"]
