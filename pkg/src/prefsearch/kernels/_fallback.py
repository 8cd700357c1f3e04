"""Pure-Python (NumPy) dominance kernel, used when the compiled core is absent."""

from __future__ import annotations

import numpy as np


def pareto_masks(costs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise Pareto relations from a (m, n) cost matrix.

    Returns two (n, n) boolean matrices: ``dominates[i, j]`` is True when
    option i is at least as good as j on every preference and strictly
    better on at least one; ``equals[i, j]`` when the two options tie on
    every preference (diagonal excluded).
    """
    costs = np.ascontiguousarray(costs, dtype=np.float64)
    n = costs.shape[1]
    le_all = np.ones((n, n), dtype=bool)
    lt_any = np.zeros((n, n), dtype=bool)
    for row in costs:
        diff = row[:, None] - row[None, :]
        le_all &= diff <= 0
        lt_any |= diff < 0
    dominates = le_all & lt_any
    equals = le_all & ~lt_any
    np.fill_diagonal(equals, False)
    return dominates, equals
