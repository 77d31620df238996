"""Kernel selection: the compiled core when importable, else the numpy fallback.

Set AMASS_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("AMASS_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _compiled
    except ImportError:
        _compiled = None
    if _compiled is not None:
        BACKEND = "cython"
        _impl = _compiled
else:
    _compiled = None

BudgetExceeded = _pykernels.BudgetExceeded


def count_orthogonal(A, m, detmod, budget=10 ** 8):
    try:
        return _impl.count_orthogonal(A, m, detmod, budget)
    except Exception as exc:
        if type(exc).__name__ == "BudgetExceeded":
            raise BudgetExceeded(str(exc)) from None
        raise


def sym4_charpoly_hist(p, dinv):
    return _impl.sym4_charpoly_hist(p, dinv)


orthogonal_elements = _pykernels.orthogonal_elements
all_vectors = _pykernels.all_vectors
