"""Kernel backend selection.

Uses the compiled Cython extension when it was built, the numpy fallback
otherwise. Set FEATSEL_PURE_PYTHON=1 to force the fallback (useful for
benchmarking and debugging).
"""

import os

if os.environ.get("FEATSEL_PURE_PYTHON", "0") not in ("", "0"):
    from . import fallback as _backend

    BACKEND = "fallback"
else:
    try:
        from . import _core as _backend  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import fallback as _backend

        BACKEND = "fallback"

contingency_table = _backend.contingency_table
knn_scores = _backend.knn_scores

__all__ = ["BACKEND", "contingency_table", "knn_scores"]
