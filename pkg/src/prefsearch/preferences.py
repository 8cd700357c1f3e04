"""Preferences as parameterized cost functions, and the orders they induce.

Four families are supported, each mapping an attribute value to a violation
cost in [0, 1]:

* ``QualitativeValue``: cost 0 for the preferred label, 1 otherwise.
* ``Directional``: normalized monotone cost over a numeric domain.
* ``Threshold``: graded step around a reference value (step when t = 0,
  with cost jumping to 1 strictly past the reference).
* ``Peaked``: V shape around a target, saturating at cost 1 beyond the
  tolerance.

A model combines preferences either by the weighted sum of satisfactions
(the default, dominance-preserving) or by their minimum (diagnostic only:
it demonstrably is not dominance-preserving).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Literal, Mapping

import numpy as np

from .catalog import AttributeSchema, Catalog, OptionRecord

SMALLER_BETTER = "smaller_better"
LARGER_BETTER = "larger_better"
LESS_THAN = "less_than"
GREATER_THAN = "greater_than"

WEIGHTED_SUM = "weighted_sum"
MIN_COMBINATOR = "min"

Comparison = Literal["better", "equal", "worse"]


class PreferenceError(ValueError):
    """A preference does not fit the catalog schema."""


class EmptyModelError(ValueError):
    """Operation needs a non-empty preference model."""


def _check_weight(weight: int) -> int:
    if not isinstance(weight, int) or isinstance(weight, bool) or not 1 <= weight <= 5:
        raise PreferenceError(f"importance weight must be an integer in 1..5, got {weight!r}")
    return weight


def _graded_step(excess: float, tolerance: float) -> float:
    # Convention for t = 0: zero excess costs 0, any positive excess costs 1.
    if excess <= 0:
        return 0.0
    if tolerance <= 0:
        return 1.0
    return min(1.0, excess / tolerance)


@dataclass(frozen=True)
class Preference:
    """Base class; concrete families implement the cost shape."""

    attr: str
    weight: int = 1

    def __post_init__(self):
        _check_weight(self.weight)

    # Family-specific pieces -------------------------------------------------

    def validate(self, schema: AttributeSchema) -> None:
        raise NotImplementedError

    def cost_of_value(self, value: Any, schema: AttributeSchema) -> float:
        raise NotImplementedError

    # Shared surface ----------------------------------------------------------

    def cost(self, option: OptionRecord, catalog: Catalog) -> float:
        """Violation cost of one option, in [0, 1]."""
        schema = catalog.attribute(self.attr)
        self.validate(schema)
        return self.cost_of_value(option.values[self.attr], schema)

    def cost_array(self, catalog: Catalog) -> np.ndarray:
        """Costs across the whole catalog, in option order."""
        schema = catalog.attribute(self.attr)
        self.validate(schema)
        col = catalog.column(self.attr)
        return np.array([self.cost_of_value(v, schema) for v in col], dtype=np.float64)


@dataclass(frozen=True)
class QualitativeValue(Preference):
    """Preference for a single label of a qualitative attribute."""

    theta: str = ""

    def validate(self, schema: AttributeSchema) -> None:
        if schema.is_numeric:
            raise TypeError(f"{self.attr}: qualitative preference on a numeric attribute")
        if self.theta not in (schema.values or ()):
            raise PreferenceError(f"{self.attr}: preferred value {self.theta!r} not in domain")

    def cost_of_value(self, value: Any, schema: AttributeSchema) -> float:
        return 0.0 if value == self.theta else 1.0


@dataclass(frozen=True)
class Directional(Preference):
    """Monotone preference with a known direction (e.g. cheaper is better).

    Any monotone shape induces the same order; the normalized linear one is
    used so costs stay in [0, 1].
    """

    direction: str = SMALLER_BETTER

    def __post_init__(self):
        super().__post_init__()
        if self.direction not in (SMALLER_BETTER, LARGER_BETTER):
            raise PreferenceError(f"unknown direction {self.direction!r}")

    def validate(self, schema: AttributeSchema) -> None:
        if not schema.is_numeric:
            raise TypeError(f"{self.attr}: directional preference on a qualitative attribute")

    def cost_of_value(self, value: Any, schema: AttributeSchema) -> float:
        span = schema.range
        if self.direction == SMALLER_BETTER:
            return (float(value) - float(schema.lo)) / span  # type: ignore[arg-type]
        return (float(schema.hi) - float(value)) / span  # type: ignore[arg-type]


@dataclass(frozen=True)
class Threshold(Preference):
    """Largest / smallest acceptable value, with tolerance for small violations."""

    polarity: str = LESS_THAN
    theta: float = 0.0
    tolerance: float = 0.0

    def __post_init__(self):
        super().__post_init__()
        if self.polarity not in (LESS_THAN, GREATER_THAN):
            raise PreferenceError(f"unknown polarity {self.polarity!r}")
        if self.tolerance < 0:
            raise PreferenceError("tolerance must be >= 0")

    def validate(self, schema: AttributeSchema) -> None:
        if not schema.is_numeric:
            raise TypeError(f"{self.attr}: threshold preference on a qualitative attribute")
        if not (schema.lo <= self.theta <= schema.hi):  # type: ignore[operator]
            raise PreferenceError(
                f"{self.attr}: threshold {self.theta} outside domain [{schema.lo}, {schema.hi}]")

    def cost_of_value(self, value: Any, schema: AttributeSchema) -> float:
        x = float(value)
        if self.polarity == LESS_THAN:
            return _graded_step(x - self.theta, self.tolerance)
        return _graded_step(self.theta - x, self.tolerance)


@dataclass(frozen=True)
class Peaked(Preference):
    """Preference for a target value, saturating at cost 1 beyond the tolerance."""

    theta: float = 0.0
    tolerance: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        if self.tolerance <= 0:
            raise PreferenceError("peaked preference needs tolerance > 0")

    def validate(self, schema: AttributeSchema) -> None:
        if not schema.is_numeric:
            raise TypeError(f"{self.attr}: peaked preference on a qualitative attribute")
        if not (schema.lo <= self.theta <= schema.hi):  # type: ignore[operator]
            raise PreferenceError(
                f"{self.attr}: target {self.theta} outside domain [{schema.lo}, {schema.hi}]")

    def cost_of_value(self, value: Any, schema: AttributeSchema) -> float:
        return min(1.0, abs(float(value) - self.theta) / self.tolerance)


def compare(pref: Preference, o1: OptionRecord, o2: OptionRecord, catalog: Catalog) -> Comparison:
    """Order two options under one preference: is o1 better, equal, or worse?"""
    c1, c2 = pref.cost(o1, catalog), pref.cost(o2, catalog)
    if c1 < c2:
        return "better"
    if c1 > c2:
        return "worse"
    return "equal"


@dataclass(frozen=True)
class PreferenceModel:
    """The set of stated preferences plus the combination rule."""

    preferences: tuple[Preference, ...]
    combinator: str = WEIGHTED_SUM

    def __post_init__(self):
        object.__setattr__(self, "preferences", tuple(self.preferences))
        if self.combinator not in (WEIGHTED_SUM, MIN_COMBINATOR):
            raise PreferenceError(f"unknown combinator {self.combinator!r}")
        directional_attrs = [p.attr for p in self.preferences if isinstance(p, Directional)]
        if len(set(directional_attrs)) != len(directional_attrs):
            raise PreferenceError("at most one directional preference per attribute")

    def __len__(self) -> int:
        return len(self.preferences)

    @property
    def stated_attrs(self) -> frozenset[str]:
        return frozenset(p.attr for p in self.preferences)

    def validate(self, catalog: Catalog) -> None:
        for p in self.preferences:
            p.validate(catalog.attribute(p.attr))

    def require_nonempty(self) -> None:
        if not self.preferences:
            raise EmptyModelError("preference model is empty: no order defined")

    def cost_matrix(self, catalog: Catalog) -> np.ndarray:
        """(m, n) matrix of per-preference costs over the catalog."""
        self.require_nonempty()
        return np.vstack([p.cost_array(catalog) for p in self.preferences])

    def with_preference(self, pref: Preference) -> "PreferenceModel":
        return PreferenceModel(self.preferences + (pref,), self.combinator)


def utility(model: PreferenceModel, option: OptionRecord, catalog: Catalog) -> float:
    """Combined satisfaction of one option under the model.

    Weighted sum: sum of weight * (1 - cost); with step costs this equals
    the sum of weights of satisfied preferences. Min combinator: the worst
    single satisfaction, ignoring weights.
    """
    model.require_nonempty()
    sats = [(p.weight, 1.0 - p.cost(option, catalog)) for p in model.preferences]
    if model.combinator == MIN_COMBINATOR:
        return min(s for _, s in sats)
    return sum(w * s for w, s in sats)


def utilities(model: PreferenceModel, catalog: Catalog) -> np.ndarray:
    """Utility of every option, in catalog order."""
    model.require_nonempty()
    costs = model.cost_matrix(catalog)
    if model.combinator == MIN_COMBINATOR:
        return (1.0 - costs).min(axis=0)
    weights = np.array([p.weight for p in model.preferences], dtype=np.float64)
    return weights @ (1.0 - costs)


def pareto_dominates(model: PreferenceModel, o1: OptionRecord, o2: OptionRecord,
                     catalog: Catalog) -> bool:
    """True when o1 is at least as good on every preference and better on one."""
    model.require_nonempty()
    strict = False
    for p in model.preferences:
        rel = compare(p, o1, o2, catalog)
        if rel == "worse":
            return False
        if rel == "better":
            strict = True
    return strict


def top_k_candidates(model: PreferenceModel, catalog: Catalog, k: int) -> list[OptionRecord]:
    """The k best options by weighted-sum utility, ties broken by ascending id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    model.require_nonempty()
    model.validate(catalog)
    u = utilities(model, catalog)
    order = sorted(range(catalog.n), key=lambda i: (-u[i], catalog.options[i].id))
    return [catalog.options[i] for i in order[:k]]


# ---------------------------------------------------------------------------
# JSON exchange format: [{attr, variant, theta?, direction?, polarity?,
# tolerance_t?, weight}]

_VARIANTS = {
    QualitativeValue: "qualitative",
    Directional: "directional",
    Threshold: "threshold",
    Peaked: "peaked",
}


def preference_to_json(pref: Preference) -> dict:
    entry: dict[str, Any] = {"attr": pref.attr, "variant": _VARIANTS[type(pref)], "weight": pref.weight}
    if isinstance(pref, QualitativeValue):
        entry["theta"] = pref.theta
    elif isinstance(pref, Directional):
        entry["direction"] = pref.direction
    elif isinstance(pref, Threshold):
        entry["polarity"] = pref.polarity
        entry["theta"] = pref.theta
        entry["tolerance_t"] = pref.tolerance
    elif isinstance(pref, Peaked):
        entry["theta"] = pref.theta
        entry["tolerance_t"] = pref.tolerance
    return entry


def preference_from_json(entry: Mapping[str, Any]) -> Preference:
    try:
        variant = entry["variant"]
        attr = entry["attr"]
    except KeyError as exc:
        raise PreferenceError(f"preference entry missing field {exc}") from None
    weight = entry.get("weight", 1)
    if variant == "qualitative":
        return QualitativeValue(attr=attr, weight=weight, theta=entry["theta"])
    if variant == "directional":
        return Directional(attr=attr, weight=weight, direction=entry["direction"])
    if variant == "threshold":
        return Threshold(attr=attr, weight=weight, polarity=entry["polarity"],
                         theta=float(entry["theta"]), tolerance=float(entry.get("tolerance_t", 0.0)))
    if variant == "peaked":
        return Peaked(attr=attr, weight=weight, theta=float(entry["theta"]),
                      tolerance=float(entry["tolerance_t"]))
    raise PreferenceError(f"unknown preference variant {variant!r}")


def model_to_json(model: PreferenceModel) -> list[dict]:
    return [preference_to_json(p) for p in model.preferences]


def model_from_json(entries: Iterable[Mapping[str, Any]],
                    combinator: str = WEIGHTED_SUM) -> PreferenceModel:
    return PreferenceModel(tuple(preference_from_json(e) for e in entries), combinator)
