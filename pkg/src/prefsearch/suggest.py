"""Suggestion scoring and selection.

Suggestions follow the look-ahead idea: show options that are not optimal
yet but are likely to become optimal once the user states one more
preference. Two model-based scores implement it:

* counting: F_C(o) = |dominators| + |equals|, fewer potential dominators
  meaning better odds; and
* probabilistic: F_P(o), the estimated probability that a hidden preference
  breaks every dominance relation at once, built from per-attribute break
  probabilities (delta) for each supported preference family.

Three baselines (random, extremes, diversity) are included for comparison,
plus greedy construction of a suggestion set maximizing the probability
that at least one member becomes optimal.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .catalog import AttributeSchema, Catalog, OptionRecord
from .dominance import DominanceIndex, DominatorBounds, attribute_bounds
from .preferences import PreferenceModel, top_k_candidates, utilities

COUNTING = "counting"
PROB_INDEPENDENT = "prob_independent"
PROB_JOINT = "prob_joint"
RANDOM = "random"
EXTREMES = "extremes"
DIVERSITY = "diversity"

STRATEGIES = (COUNTING, PROB_INDEPENDENT, PROB_JOINT, RANDOM, EXTREMES, DIVERSITY)
MODEL_BASED = (COUNTING, PROB_INDEPENDENT, PROB_JOINT)

THRESHOLD_FAMILY = "threshold"
PEAKED_FAMILY = "peaked"
DIRECTIONAL_FAMILY = "directional"


class AllPreferencesStatedError(ValueError):
    """Every attribute already carries a preference: nothing left to suggest for."""


@dataclass(frozen=True)
class SuggestionConfig:
    """Knobs for suggestion scoring and selection.

    ``value_priors`` overrides the per-attribute distribution of the hidden
    preferred value on qualitative attributes (default: the schema's prior,
    else uniform). Numeric attributes assume a hidden threshold preference
    by default; ``numeric_families``/``tolerances`` adjust the family and
    its tolerance per attribute. ``hidden_pref_mode`` picks between the
    one-hidden-preference sum form and the product form of F_P.
    """

    strategy: str = PROB_JOINT
    criterion: str = "pareto"
    set_size: int = 1
    hidden_pref_mode: str = "multi"  # "multi" (product form) or "single" (sum form)
    value_priors: Mapping[str, Mapping[str, float]] = field(default_factory=dict)
    numeric_families: Mapping[str, str] = field(default_factory=dict)
    tolerances: Mapping[str, float] = field(default_factory=dict)
    polarity_weight: float = 0.5
    candidate_count: int = 0  # candidates excluded by the random baseline
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.set_size < 1:
            raise ValueError("set_size must be >= 1")
        if self.hidden_pref_mode not in ("multi", "single"):
            raise ValueError(f"unknown hidden_pref_mode {self.hidden_pref_mode!r}")
        if not 0.0 <= self.polarity_weight <= 1.0:
            raise ValueError("polarity_weight must be in [0, 1]")

    def family_for(self, schema: AttributeSchema) -> str:
        if not schema.is_numeric:
            return "qualitative"
        return self.numeric_families.get(schema.name, THRESHOLD_FAMILY)

    def tolerance_for(self, schema: AttributeSchema) -> float:
        t = self.tolerances.get(schema.name)
        if t is not None:
            return float(t)
        family = self.family_for(schema)
        if family == PEAKED_FAMILY:
            raise ValueError(f"{schema.name}: peaked scoring family needs an explicit tolerance")
        return 0.0

    def value_prior_for(self, schema: AttributeSchema) -> dict[str, float]:
        override = self.value_priors.get(schema.name)
        if override is None:
            return schema.uniform_value_prior()
        if set(override) - set(schema.values or ()):
            raise ValueError(f"{schema.name}: value prior names unknown values")
        total = sum(override.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"{schema.name}: value prior sums to {total}, expected 1")
        return {v: float(override.get(v, 0.0)) for v in schema.values or ()}


@dataclass(frozen=True)
class SuggestionScore:
    """Scores for one option: counting metric, break probability, per-attribute deltas."""

    option_id: str
    f_c: int
    f_p: float
    deltas: Mapping[str, float]
    dominated: bool


# ---------------------------------------------------------------------------
# Per-family break probabilities (delta).
#
# Each delta is the probability that a hidden preference on the attribute
# makes the option strictly better than all of its dominators without
# becoming worse than any tied option. Options without dominators are
# already optimal, so every delta is 0 for them.


def delta_qualitative(bounds: DominatorBounds, prior: Mapping[str, float]) -> float:
    """Hidden single-value preference: the option's own label must be the one."""
    if bounds.dominator_count == 0:
        return 0.0
    if bounds.dom_shares_value:
        return 0.0
    return float(prior.get(bounds.value, 0.0))


def delta_directional(bounds: DominatorBounds, polarity_weight: float = 0.5) -> float:
    """Hidden monotone preference of unknown direction.

    The option escapes iff its value lies strictly outside the dominators'
    span on the favored side and does not fall behind any tied option.
    """
    if bounds.dominator_count == 0:
        return 0.0
    a = float(bounds.value)  # type: ignore[arg-type]
    smaller = a < bounds.l and (bounds.eq_min is None or a <= bounds.eq_min)  # type: ignore[operator]
    larger = a > bounds.h and (bounds.eq_max is None or a >= bounds.eq_max)  # type: ignore[operator]
    return polarity_weight * float(smaller) + (1.0 - polarity_weight) * float(larger)


def delta_threshold(bounds: DominatorBounds, attr_range: float, tolerance: float = 0.0) -> float:
    """Hidden threshold preference of unknown polarity, graded step cost.

    The reference value must fall between the option's value and the
    dominators' nearest bound; each polarity is weighted 1/2.
    """
    if attr_range <= 0:
        raise ValueError("attribute range must be positive")
    if bounds.dominator_count == 0:
        return 0.0
    a = float(bounds.value)  # type: ignore[arg-type]
    if a < bounds.l:  # type: ignore[operator]
        delta = (bounds.l - a + tolerance) / (2.0 * attr_range)  # type: ignore[operator]
    elif a > bounds.h:  # type: ignore[operator]
        delta = (a - bounds.h + tolerance) / (2.0 * attr_range)  # type: ignore[operator]
    else:
        return 0.0
    return float(min(1.0, max(0.0, delta)))


def delta_peaked(bounds: DominatorBounds, attr_range: float, tolerance: float,
                 domain_lo: float, domain_hi: float) -> float:
    """Hidden peaked preference: the target must land nearer the option than
    any potential dominator, within the saturation tolerance.

    When no potential dominator exists on one side, the domain bound stands
    in as the limit of the midpoint construction.
    """
    if attr_range <= 0:
        raise ValueError("attribute range must be positive")
    if tolerance <= 0:
        raise ValueError("peaked family needs tolerance > 0")
    if bounds.dominator_count == 0:
        return 0.0
    if bounds.dom_shares_value:
        # A dominator holding the exact value can never be strictly beaten.
        return 0.0
    a = float(bounds.value)  # type: ignore[arg-type]
    g = bounds.g if bounds.g is not None else domain_lo
    s = bounds.s if bounds.s is not None else domain_hi
    m1 = (a + g) / 2.0
    m2 = (a + s) / 2.0
    window = min(m2, a + tolerance) - max(m1, a - tolerance)
    return float(min(1.0, max(0.0, window / attr_range)))


# ---------------------------------------------------------------------------
# Counting scores


def counting_scores(index: DominanceIndex) -> list[SuggestionScore]:
    """F_C(o) = |dominators| + |equals| for every option, in catalog order."""
    f_c = index.dominator_counts + index.equal_counts
    dominated = index.dominated
    return [
        SuggestionScore(option_id=oid, f_c=int(f_c[j]), f_p=0.0, deltas={},
                        dominated=bool(dominated[j]))
        for j, oid in enumerate(index.ids)
    ]


def counting_ranking(index: DominanceIndex) -> list[str]:
    """Dominated options from fewest to most potential dominators, ties by id."""
    scores = counting_scores(index)
    eligible = [s for s in scores if s.dominated]
    eligible.sort(key=lambda s: (s.f_c, s.option_id))
    return [s.option_id for s in eligible]


# ---------------------------------------------------------------------------
# Probabilistic scores


def _unstated_attrs(model: PreferenceModel, catalog: Catalog) -> list[AttributeSchema]:
    stated = model.stated_attrs
    return [a for a in catalog.schema if a.name not in stated]


def _joint_deltas(index: DominanceIndex, catalog: Catalog, schema: AttributeSchema,
                  config: SuggestionConfig) -> np.ndarray:
    """Per-option delta on one attribute from the dominator bounds."""
    bounds = attribute_bounds(index, catalog, schema.name)
    family = config.family_for(schema)
    out = np.zeros(index.n)
    if family == "qualitative":
        prior = config.value_prior_for(schema)
        for j, b in enumerate(bounds):
            out[j] = delta_qualitative(b, prior)
        return out
    span = schema.range
    if family == THRESHOLD_FAMILY:
        t = config.tolerance_for(schema)
        for j, b in enumerate(bounds):
            out[j] = delta_threshold(b, span, t)
    elif family == PEAKED_FAMILY:
        t = config.tolerance_for(schema)
        for j, b in enumerate(bounds):
            out[j] = delta_peaked(b, span, t, float(schema.lo), float(schema.hi))  # type: ignore[arg-type]
    elif family == DIRECTIONAL_FAMILY:
        for j, b in enumerate(bounds):
            out[j] = delta_directional(b, config.polarity_weight)
    else:
        raise ValueError(f"unknown scoring family {family!r}")
    return out


def _pairwise_windows(vals: np.ndarray, schema: AttributeSchema, family: str,
                      tolerance: float) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise escape probabilities W[j, i] = P[option j beats option i].

    Returns one matrix per polarity (lower-is-better, higher-is-better); for
    the peaked family the two halves of the split window are returned and
    summed by the caller.
    """
    lo, hi, span = float(schema.lo), float(schema.hi), schema.range  # type: ignore[arg-type]
    vj = vals[:, None]
    vi = vals[None, :]
    if family == THRESHOLD_FAMILY:
        # less-than: reference in (v_j - t, v_i); greater-than mirrored.
        less = np.clip((np.minimum(vi, hi) - np.maximum(vj - tolerance, lo)) / span, 0.0, 1.0)
        less = np.where(vj < vi, less, 0.0)
        greater = np.clip((np.minimum(vj + tolerance, hi) - np.maximum(vi, lo)) / span, 0.0, 1.0)
        greater = np.where(vj > vi, greater, 0.0)
        return less, greater
    if family == PEAKED_FAMILY:
        mid = (vj + vi) / 2.0
        below = np.where(
            vj < vi,
            np.clip((np.minimum(mid, vj + tolerance) - np.maximum(vj - tolerance, lo)) / span, 0.0, 1.0),
            0.0)
        above = np.where(
            vj > vi,
            np.clip((np.minimum(vj + tolerance, hi) - np.maximum(mid, vj - tolerance)) / span, 0.0, 1.0),
            0.0)
        return below, above
    if family == DIRECTIONAL_FAMILY:
        return (vj < vi).astype(float), (vj > vi).astype(float)
    raise ValueError(f"unknown scoring family {family!r}")


def _independent_deltas(index: DominanceIndex, catalog: Catalog, schema: AttributeSchema,
                        config: SuggestionConfig) -> np.ndarray:
    """Per-option delta assuming dominators break independently.

    Applies to numeric families only; for single-value qualitative
    preferences one drawn value breaks every dominance at once, so the
    product over dominators collapses to the single-dominator (joint) form.
    """
    family = config.family_for(schema)
    if family == "qualitative":
        return _joint_deltas(index, catalog, schema, config)

    dom = index.dominates_mask
    eq = index.equals_mask
    vals = catalog.column(schema.name)

    def masked_product(w: np.ndarray) -> np.ndarray:
        dom_factor = np.where(dom.T, w, 1.0).prod(axis=1)
        not_worse = 1.0 - w.T  # chance a tied option does not overtake
        eq_factor = np.where(eq.T, not_worse, 1.0).prod(axis=1)
        return dom_factor * eq_factor

    tolerance = config.tolerance_for(schema)
    w_lo, w_hi = _pairwise_windows(vals.astype(np.float64), schema, family, tolerance)
    if family == PEAKED_FAMILY:
        # No polarity: each pair contributes exactly one window side.
        out = masked_product(w_lo + w_hi)
    else:
        pw = config.polarity_weight
        out = pw * masked_product(w_lo) + (1.0 - pw) * masked_product(w_hi)
    out = np.where(index.dominated, out, 0.0)
    return np.clip(out, 0.0, 1.0)


def probabilistic_scores(index: DominanceIndex, catalog: Catalog, model: PreferenceModel,
                         config: SuggestionConfig) -> list[SuggestionScore]:
    """F_P for every option, in catalog order.

    Per unstated attribute, delta is the chance a hidden preference there
    breaks all dominance relations; F_P combines them over attributes using
    the per-attribute prior that a hidden preference exists at all.
    """
    model.validate(catalog)
    unstated = _unstated_attrs(model, catalog)
    if not unstated:
        raise AllPreferencesStatedError("every attribute already has a stated preference")
    joint = config.strategy != PROB_INDEPENDENT
    deltas: dict[str, np.ndarray] = {}
    for schema in unstated:
        if joint:
            deltas[schema.name] = _joint_deltas(index, catalog, schema, config)
        else:
            deltas[schema.name] = _independent_deltas(index, catalog, schema, config)

    priors = {a.name: a.prior_weight for a in unstated}
    if config.hidden_pref_mode == "single":
        f_p = sum(priors[name] * deltas[name] for name in deltas)
    else:
        keep = np.ones(index.n)
        for name, d in deltas.items():
            keep = keep * (1.0 - priors[name] * d)
        f_p = 1.0 - keep

    f_c = index.dominator_counts + index.equal_counts
    dominated = index.dominated
    stated_zero = {a.name: 0.0 for a in catalog.schema if a.name not in deltas}
    scores = []
    for j, oid in enumerate(index.ids):
        per_attr = {a.name: float(deltas[a.name][j]) if a.name in deltas else stated_zero[a.name]
                    for a in catalog.schema}
        scores.append(SuggestionScore(option_id=oid, f_c=int(f_c[j]), f_p=float(f_p[j]),
                                      deltas=per_attr, dominated=bool(dominated[j])))
    return scores


def probabilistic_ranking(scores: Sequence[SuggestionScore]) -> list[str]:
    """Dominated options by descending F_P, ties by ascending id."""
    eligible = [s for s in scores if s.dominated]
    eligible.sort(key=lambda s: (-s.f_p, s.option_id))
    return [s.option_id for s in eligible]


# ---------------------------------------------------------------------------
# Suggestion sets


def group_opt_probability(deltas: Sequence[Mapping[str, float]],
                          attr_priors: Mapping[str, float]) -> float:
    """Probability that at least one member of a group becomes optimal.

    ``deltas`` holds the per-attribute break probabilities of each group
    member; ``attr_priors`` the chance of a hidden preference per attribute.
    """
    if not deltas:
        raise ValueError("group must be non-empty")
    outer = 1.0
    for attr, p_a in attr_priors.items():
        inner = 1.0
        for d in deltas:
            inner *= 1.0 - d.get(attr, 0.0)
        outer *= 1.0 - p_a * (1.0 - inner)
    return 1.0 - outer


def _greedy_group(score_by_id: Mapping[str, SuggestionScore], eligible: list[str],
                  attr_priors: Mapping[str, float], size: int) -> list[str]:
    """Add members one by one, each maximizing the group optimality gain."""
    chosen: list[str] = []
    chosen_deltas: list[Mapping[str, float]] = []
    pool = sorted(eligible)
    while pool and len(chosen) < size:
        best_id, best_p = None, -1.0
        for oid in pool:
            p = group_opt_probability(chosen_deltas + [score_by_id[oid].deltas], attr_priors)
            if p > best_p:
                best_id, best_p = oid, p
        assert best_id is not None
        chosen.append(best_id)
        chosen_deltas.append(score_by_id[best_id].deltas)
        pool.remove(best_id)
    return chosen


def _normalized_distance(o1: OptionRecord, o2: OptionRecord, catalog: Catalog) -> float:
    """Mean per-attribute distance: |difference|/range numeric, 0/1 qualitative."""
    total = 0.0
    for a in catalog.schema:
        v1, v2 = o1.values[a.name], o2.values[a.name]
        if a.is_numeric:
            total += abs(float(v1) - float(v2)) / a.range
        else:
            total += 0.0 if v1 == v2 else 1.0
    return total / catalog.k


def select_suggestions(catalog: Catalog, model: PreferenceModel, index: DominanceIndex,
                       config: SuggestionConfig,
                       exclude_ids: frozenset[str] = frozenset()) -> list[OptionRecord]:
    """Pick the suggestion set for one display, per the configured strategy.

    ``exclude_ids`` removes options already shown elsewhere in the display
    (candidates and suggestions stay disjoint).
    """
    size = config.set_size
    strategy = config.strategy

    if strategy == COUNTING:
        # With a constant per-dominator escape probability the group gain
        # factorizes, so the greedy set is simply the lowest-F_C options.
        ranked = [oid for oid in counting_ranking(index) if oid not in exclude_ids]
        return [catalog.option(oid) for oid in ranked[:size]]

    if strategy in (PROB_INDEPENDENT, PROB_JOINT):
        try:
            scores = probabilistic_scores(index, catalog, model, config)
        except AllPreferencesStatedError:
            return []
        by_id = {s.option_id: s for s in scores}
        eligible = [s.option_id for s in scores
                    if s.dominated and s.option_id not in exclude_ids]
        priors = {a.name: a.prior_weight for a in _unstated_attrs(model, catalog)}
        chosen = _greedy_group(by_id, eligible, priors, size)
        return [catalog.option(oid) for oid in chosen]

    if strategy == RANDOM:
        rng = np.random.default_rng(config.seed)
        excluded = set(exclude_ids)
        if config.candidate_count:
            excluded |= {o.id for o in top_k_candidates(model, catalog, config.candidate_count)}
        pool = sorted(oid for oid in catalog.ids if oid not in excluded)
        take = min(size, len(pool))
        picks = rng.choice(len(pool), size=take, replace=False) if take else []
        return [catalog.option(pool[i]) for i in picks]

    if strategy == EXTREMES:
        stated = model.stated_attrs
        chosen: list[str] = []
        for a in catalog.schema:
            if not a.is_numeric or a.name in stated:
                continue
            col = catalog.column(a.name).astype(np.float64)
            for pick_max in (False, True):
                target = col.max() if pick_max else col.min()
                hits = [catalog.ids[i] for i in np.flatnonzero(col == target)
                        if catalog.ids[i] not in exclude_ids]
                if not hits:
                    continue
                oid = min(hits)
                if oid not in chosen:
                    chosen.append(oid)
                if len(chosen) >= size:
                    return [catalog.option(o) for o in chosen]
        return [catalog.option(o) for o in chosen]

    if strategy == DIVERSITY:
        shortlist = [o for o in top_k_candidates(model, catalog, min(20, catalog.n))
                     if o.id not in exclude_ids]
        if not shortlist:
            return []
        chosen_opts = [shortlist[0]]
        remaining = shortlist[1:]
        while remaining and len(chosen_opts) < size:
            best, best_key = None, None
            for o in remaining:
                d = min(_normalized_distance(o, c, catalog) for c in chosen_opts)
                key = (-d, o.id)
                if best_key is None or key < best_key:
                    best, best_key = o, key
            chosen_opts.append(best)  # type: ignore[arg-type]
            remaining.remove(best)  # type: ignore[arg-type]
        return chosen_opts

    raise ValueError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# Score dump


def scores_to_csv(scores: Sequence[SuggestionScore], catalog: Catalog) -> str:
    """CSV dump: option_id, F_C, F_P, then one delta column per schema attribute."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["option_id", "F_C", "F_P"] + [f"delta_{a.name}" for a in catalog.schema])
    for s in scores:
        row = [s.option_id, s.f_c, repr(round(s.f_p, 12))]
        row += [repr(round(s.deltas.get(a.name, 0.0), 12)) for a in catalog.schema]
        writer.writerow(row)
    return buf.getvalue()
