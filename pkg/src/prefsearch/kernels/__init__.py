"""Dominance kernels: compiled extension when available, NumPy fallback otherwise.

Set ``PREFSEARCH_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and to reproduce results on machines without a compiler).
"""

from __future__ import annotations

import os

if os.environ.get("PREFSEARCH_PURE_PYTHON"):
    from ._fallback import pareto_masks

    BACKEND = "python"
else:
    try:
        from ._core import pareto_masks  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from ._fallback import pareto_masks

        BACKEND = "python"

__all__ = ["pareto_masks", "BACKEND"]
