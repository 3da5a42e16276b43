"""Exact elimination kernels.

The compiled extension ``chowbeta._kernels`` is used when it was built;
otherwise the pure-Python implementation in ``_kernels_py`` is used.  Set
``CHOWBETA_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("CHOWBETA_PURE_PYTHON"):
    from ._kernels_py import Echelon, echelonize, greedy_basis, leading_column
    BACKEND = "python"
else:
    try:
        from ._kernels import Echelon, echelonize, greedy_basis, leading_column
        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import Echelon, echelonize, greedy_basis, leading_column
        BACKEND = "python"

__all__ = ["BACKEND", "Echelon", "echelonize", "greedy_basis", "leading_column"]
