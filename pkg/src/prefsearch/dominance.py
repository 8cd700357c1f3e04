"""Dominance indexing: who dominates whom, who ties, and dominator bounds.

The index is the shared substrate for suggestion scoring: for every option
it knows the set of strict dominators and the set of options tied on every
stated preference. Those two sets are the potential dominators once a new
preference arrives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import kernels
from .catalog import Catalog
from .preferences import PreferenceModel, utilities

PARETO = "pareto"
UTILITY = "utility"


@dataclass(frozen=True, eq=False)
class DominanceIndex:
    """Pairwise dominance relations over one catalog under one model.

    ``dominates_mask[i, j]`` is True when option i dominates option j under
    the chosen criterion; ``equals_mask`` marks exact ties (self excluded).
    Both matrices are immutable. Identity comparison only (the array fields
    make field-wise equality ill-defined).
    """

    criterion: str
    ids: tuple[str, ...]
    dominates_mask: np.ndarray
    equals_mask: np.ndarray

    def __post_init__(self):
        self.dominates_mask.setflags(write=False)
        self.equals_mask.setflags(write=False)
        object.__setattr__(self, "_pos", {oid: i for i, oid in enumerate(self.ids)})

    @property
    def n(self) -> int:
        return len(self.ids)

    def position(self, option_id: str) -> int:
        return self._pos[option_id]  # type: ignore[attr-defined]

    def dominators(self, option_id: str) -> frozenset[str]:
        """Ids of options that strictly dominate the given one."""
        j = self.position(option_id)
        return frozenset(self.ids[i] for i in np.flatnonzero(self.dominates_mask[:, j]))

    def equals(self, option_id: str) -> frozenset[str]:
        """Ids of options tied on every preference (the option itself excluded)."""
        j = self.position(option_id)
        return frozenset(self.ids[i] for i in np.flatnonzero(self.equals_mask[:, j]))

    def is_dominated(self, option_id: str) -> bool:
        return bool(self.dominates_mask[:, self.position(option_id)].any())

    @property
    def dominator_counts(self) -> np.ndarray:
        return self.dominates_mask.sum(axis=0)

    @property
    def equal_counts(self) -> np.ndarray:
        return self.equals_mask.sum(axis=0)

    @property
    def dominated(self) -> np.ndarray:
        """Boolean vector: True for options with at least one strict dominator."""
        return self.dominates_mask.any(axis=0)

    def __iter__(self) -> Iterator[str]:
        return iter(self.ids)


def build_dominance_index(model: PreferenceModel, catalog: Catalog,
                          criterion: str = PARETO) -> DominanceIndex:
    """Build the dominance index under the Pareto or utility criterion.

    Pareto uses the pairwise kernel (quadratic in catalog size); utility
    derives both masks from the total order of combined utilities.
    """
    model.require_nonempty()
    model.validate(catalog)
    if criterion == PARETO:
        costs = model.cost_matrix(catalog)
        dominates, equals = kernels.pareto_masks(costs)
    elif criterion == UTILITY:
        u = utilities(model, catalog)
        dominates = u[:, None] > u[None, :]
        equals = u[:, None] == u[None, :]
        np.fill_diagonal(equals, False)
    else:
        raise ValueError(f"unknown dominance criterion {criterion!r}")
    return DominanceIndex(criterion=criterion, ids=catalog.ids,
                          dominates_mask=dominates, equals_mask=equals)


@dataclass(frozen=True)
class DominatorBounds:
    """Per-option, per-attribute geometry of the potential dominators.

    Numeric fields (None when undefined): ``l``/``h`` bound the dominators'
    values; ``g``/``s`` are the nearest dominator-or-equal values strictly
    below / above the option's own value; ``eq_min``/``eq_max`` bound the
    equal set. ``dom_shares_value`` flags a dominator holding exactly the
    option's value. For qualitative attributes the per-option accessor also
    materializes the dominator and equal value sets.
    """

    value: object
    dominator_count: int
    equal_count: int
    l: float | None = None
    h: float | None = None
    g: float | None = None
    s: float | None = None
    eq_min: float | None = None
    eq_max: float | None = None
    dom_shares_value: bool = False
    dominator_values: frozenset | None = None
    equal_values: frozenset | None = None


def dominator_bounds(index: DominanceIndex, catalog: Catalog, option_id: str,
                     attr: str) -> DominatorBounds:
    """Bounds for one option on one attribute (set-materializing accessor)."""
    j = index.position(option_id)
    col = catalog.column(attr)
    dom_rows = np.flatnonzero(index.dominates_mask[:, j])
    eq_rows = np.flatnonzero(index.equals_mask[:, j])
    value = col[j]
    dom_vals = [col[i] for i in dom_rows]
    eq_vals = [col[i] for i in eq_rows]
    schema = catalog.attribute(attr)
    if not schema.is_numeric:
        return DominatorBounds(
            value=value,
            dominator_count=len(dom_rows),
            equal_count=len(eq_rows),
            dom_shares_value=any(v == value for v in dom_vals),
            dominator_values=frozenset(dom_vals),
            equal_values=frozenset(eq_vals),
        )
    geq_vals = dom_vals + eq_vals
    below = [v for v in geq_vals if v < value]
    above = [v for v in geq_vals if v > value]
    return DominatorBounds(
        value=float(value),
        dominator_count=len(dom_rows),
        equal_count=len(eq_rows),
        l=min(dom_vals) if dom_vals else None,
        h=max(dom_vals) if dom_vals else None,
        g=max(below) if below else None,
        s=min(above) if above else None,
        eq_min=min(eq_vals) if eq_vals else None,
        eq_max=max(eq_vals) if eq_vals else None,
        dom_shares_value=any(v == value for v in dom_vals),
    )


def attribute_bounds(index: DominanceIndex, catalog: Catalog, attr: str) -> list[DominatorBounds]:
    """Bounds for every option on one attribute, computed vectorized.

    Qualitative value sets are left out here (the flags carry everything the
    delta formulas need); use `dominator_bounds` for the set view.
    """
    dom = index.dominates_mask
    eq = index.equals_mask
    geq = dom | eq
    dom_counts = dom.sum(axis=0)
    eq_counts = eq.sum(axis=0)
    schema = catalog.attribute(attr)
    col = catalog.column(attr)
    n = index.n

    if not schema.is_numeric:
        shares = (dom & (col[:, None] == col[None, :])).any(axis=0)
        return [
            DominatorBounds(value=col[j], dominator_count=int(dom_counts[j]),
                            equal_count=int(eq_counts[j]), dom_shares_value=bool(shares[j]))
            for j in range(n)
        ]

    vals = col.astype(np.float64)
    grid = np.broadcast_to(vals[:, None], (n, n))
    l = np.where(dom, grid, np.inf).min(axis=0)
    h = np.where(dom, grid, -np.inf).max(axis=0)
    below = geq & (grid < vals[None, :])
    above = geq & (grid > vals[None, :])
    g = np.where(below, grid, -np.inf).max(axis=0)
    s = np.where(above, grid, np.inf).min(axis=0)
    eq_min = np.where(eq, grid, np.inf).min(axis=0)
    eq_max = np.where(eq, grid, -np.inf).max(axis=0)
    shares = (dom & (grid == vals[None, :])).any(axis=0)

    def _opt(x: float) -> float | None:
        return None if not np.isfinite(x) else float(x)

    return [
        DominatorBounds(
            value=float(vals[j]),
            dominator_count=int(dom_counts[j]),
            equal_count=int(eq_counts[j]),
            l=_opt(l[j]), h=_opt(h[j]), g=_opt(g[j]), s=_opt(s[j]),
            eq_min=_opt(eq_min[j]), eq_max=_opt(eq_max[j]),
            dom_shares_value=bool(shares[j]),
        )
        for j in range(n)
    ]
