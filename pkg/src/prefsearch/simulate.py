"""Synthetic-user simulation of the critiquing loop.

A simulated user holds a full hidden preference model, states one preference
up front, and then behaves opportunistically: at each cycle the tool shows
candidates plus strategy-chosen suggestions, and the user states a further
hidden preference only when some displayed option would turn Pareto-optimal
once that preference joins the stated model. The run ends when the model is
complete or the user stays silent.

Experiments aggregate many such runs into the fraction of hidden
preferences discovered and a discovery curve.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .catalog import Catalog, CatalogSpec, generate_random_catalog
from .dominance import DominanceIndex, build_dominance_index
from .preferences import (Directional, Peaked, Preference, PreferenceModel,
                          QualitativeValue, top_k_candidates)
from .suggest import STRATEGIES, SuggestionConfig, select_suggestions

STRATEGY_COLUMNS = ("random", "extreme", "diversity", "counting", "prob1", "prob2")
_COLUMN_TO_STRATEGY = {
    "random": "random",
    "extreme": "extremes",
    "diversity": "diversity",
    "counting": "counting",
    "prob1": "prob_independent",
    "prob2": "prob_joint",
}
STRATEGY_ALIASES = {**_COLUMN_TO_STRATEGY, "extremes": "extremes", "prob": "prob_joint",
                    **{s: s for s in STRATEGIES}}


@dataclass(frozen=True)
class HiddenUserModel:
    """The user's complete preference model; one entry is stated initially."""

    preferences: tuple[Preference, ...]
    initial_index: int

    def __post_init__(self):
        if not self.preferences:
            raise ValueError("hidden model needs at least one preference")
        attrs = [p.attr for p in self.preferences]
        if len(set(attrs)) != len(attrs):
            raise ValueError("at most one hidden preference per attribute")
        if not 0 <= self.initial_index < len(self.preferences):
            raise ValueError("initial_index out of range")

    @property
    def m(self) -> int:
        return len(self.preferences)


# Tolerance of hidden peaked preferences, as a fraction of the attribute range.
# The value is calibrated against the published aggregate discovery rates.
HIDDEN_PEAKED_TOLERANCE = 0.09

# Ordered discrete attributes with at most this many levels get a monotone
# hidden preference rather than a peaked one.
_FEW_LEVELS = 10.0


def _is_few_level(schema) -> bool:
    return schema.is_numeric and schema.discrete and schema.range <= _FEW_LEVELS


def generate_hidden_model(catalog: Catalog, m: int, seed: int) -> HiddenUserModel:
    """Draw m preferences on distinct attributes, plus the initially stated one.

    Qualitative attributes get a single-value preference with a uniform
    target; few-level ordered attributes a monotone preference of uniform
    direction; other numeric attributes a peaked preference with uniform
    target and tolerance 0.09 * range. The initially stated preference is
    monotone (on a numeric attribute when one is available): users lead
    with order-like preferences such as the cheapest price, which also
    anchors the dominance structure so ties stay rare as the catalog
    grows. Weights are uniform on 1..5; deterministic in the seed.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > catalog.k:
        raise ValueError(f"m={m} exceeds the {catalog.k} available attributes")
    rng = np.random.default_rng(seed)
    attrs = [catalog.schema[i] for i in rng.choice(catalog.k, size=m, replace=False)]
    numeric_positions = [p for p, a in enumerate(attrs) if a.is_numeric]
    if numeric_positions:
        initial = int(rng.choice(numeric_positions))
    else:
        initial = int(rng.integers(0, m))
    prefs: list[Preference] = []
    for p, a in enumerate(attrs):
        weight = int(rng.integers(1, 6))
        if a.is_numeric and (p == initial or _is_few_level(a)):
            direction = "smaller_better" if rng.random() < 0.5 else "larger_better"
            prefs.append(Directional(attr=a.name, weight=weight, direction=direction))
        elif a.is_numeric:
            theta = float(rng.uniform(a.lo, a.hi))
            prefs.append(Peaked(attr=a.name, weight=weight, theta=theta,
                                tolerance=HIDDEN_PEAKED_TOLERANCE * a.range))
        else:
            theta = a.values[int(rng.integers(0, len(a.values)))]  # type: ignore[index]
            prefs.append(QualitativeValue(attr=a.name, weight=weight, theta=theta))
    return HiddenUserModel(preferences=tuple(prefs), initial_index=initial)


def simulation_scoring_config(catalog: Catalog, strategy: str, set_size: int,
                              criterion: str, candidate_count: int,
                              seed: int) -> SuggestionConfig:
    """Suggestion scoring matched to the simulated population: per attribute,
    the hidden-preference family the generator would draw there."""
    families: dict[str, str] = {}
    tolerances: dict[str, float] = {}
    for a in catalog.schema:
        if not a.is_numeric:
            continue
        if _is_few_level(a):
            families[a.name] = "directional"
        else:
            families[a.name] = "peaked"
            tolerances[a.name] = HIDDEN_PEAKED_TOLERANCE * a.range
    return SuggestionConfig(strategy=strategy, criterion=criterion, set_size=set_size,
                            numeric_families=families, tolerances=tolerances,
                            candidate_count=candidate_count, seed=seed)


@dataclass(frozen=True)
class SimConfig:
    """One simulation setting: strategy, hidden model size, display shape."""

    strategy: str = "prob_joint"
    m: int = 6
    display_candidates: int = 0
    display_suggestions: int = 5
    runs: int = 100
    seed: int = 0
    criterion: str = "pareto"
    catalog_spec: CatalogSpec | None = None
    # None: score with the families the hidden-model generator uses.
    scoring: SuggestionConfig | None = None

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.display_suggestions < 0 or self.display_candidates < 0:
            raise ValueError("display sizes must be >= 0")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")


def becomes_pareto_optimal(index: DominanceIndex, catalog: Catalog, option_id: str,
                           pref: Preference) -> bool:
    """Would a currently dominated option turn Pareto-optimal under one more
    preference?

    True iff the option is strictly better under the new preference than
    every current dominator and not worse than any currently tied option.
    """
    j = index.position(option_id)
    if not index.dominates_mask[:, j].any():
        return False
    costs = pref.cost_array(catalog)
    dom = index.dominates_mask[:, j]
    eq = index.equals_mask[:, j]
    if not (costs[dom] > costs[j]).all():
        return False
    return bool((costs[eq] >= costs[j]).all())


def user_react(hidden: HiddenUserModel, stated: Sequence[Preference], display: Sequence[str],
               index: DominanceIndex, catalog: Catalog,
               scan_order: Sequence[int]) -> Preference | None:
    """Opportunistic reaction: state the first hidden preference (in scan
    order) that would make some displayed option newly Pareto-optimal."""
    stated_attrs = {p.attr for p in stated}
    for i in scan_order:
        pref = hidden.preferences[i]
        if pref.attr in stated_attrs:
            continue
        for oid in display:
            if becomes_pareto_optimal(index, catalog, oid, pref):
                return pref
    return None


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one simulated session."""

    run: int
    strategy: str
    discovered: int
    cycles: int
    found: bool


def run_session(catalog: Catalog, hidden: HiddenUserModel, config: SimConfig,
                seed: int, run_id: int = 0) -> RunRecord:
    """One critiquing session against an opportunistic simulated user."""
    rng = np.random.default_rng(seed)
    scan_order = [int(i) for i in rng.permutation(hidden.m)]
    stated: list[Preference] = [hidden.preferences[hidden.initial_index]]
    cycles = 0
    while len(stated) < hidden.m:
        model = PreferenceModel(tuple(stated))
        index = build_dominance_index(model, catalog, config.criterion)
        display: list[str] = []
        if config.display_candidates:
            display += [o.id for o in top_k_candidates(model, catalog, config.display_candidates)]
        if config.display_suggestions:
            scoring = config.scoring
            if scoring is None:
                scoring = simulation_scoring_config(
                    catalog, config.strategy, config.display_suggestions,
                    config.criterion, config.display_candidates,
                    seed=int(rng.integers(0, 2**31)))
            else:
                scoring = replace(scoring, strategy=config.strategy,
                                  criterion=config.criterion,
                                  set_size=config.display_suggestions,
                                  candidate_count=config.display_candidates,
                                  seed=int(rng.integers(0, 2**31)))
            for o in select_suggestions(catalog, model, index, scoring):
                if o.id not in display:
                    display.append(o.id)
        cycles += 1
        reaction = user_react(hidden, stated, display, index, catalog, scan_order)
        if reaction is None:
            break
        stated.append(reaction)
    discovered = len(stated) - 1
    return RunRecord(run=run_id, strategy=config.strategy, discovered=discovered,
                     cycles=cycles, found=discovered == hidden.m - 1)


@dataclass(frozen=True)
class ExperimentResult:
    """Aggregates over independent runs of one configuration."""

    config: SimConfig
    records: tuple[RunRecord, ...]

    @property
    def mean_fraction_discovered(self) -> float:
        """Average share of the discoverable (non-initial) preferences found."""
        discoverable = self.config.m - 1
        if discoverable == 0:
            return 1.0
        return float(np.mean([r.discovered / discoverable for r in self.records]))

    def discovery_curve(self) -> list[float]:
        """Entry x: fraction of runs that discovered at least x preferences."""
        discoverable = self.config.m - 1
        counts = np.array([r.discovered for r in self.records])
        return [float((counts >= x).mean()) for x in range(discoverable + 1)]


def run_experiment(config: SimConfig, catalog: Catalog | None = None) -> ExperimentResult:
    """Run ``config.runs`` independent sessions, deterministic in the seed.

    With a catalog spec, a fresh catalog is drawn per run; a fixed catalog
    is reused across runs. Hidden models are drawn per run either way.
    """
    if catalog is None and config.catalog_spec is None:
        raise ValueError("need either a catalog or a catalog spec")
    seeds = np.random.SeedSequence(config.seed).generate_state(3 * config.runs)
    records = []
    for run_id in range(config.runs):
        cat_seed, model_seed, session_seed = (int(s) for s in seeds[3 * run_id: 3 * run_id + 3])
        cat = catalog if catalog is not None else generate_random_catalog(
            config.catalog_spec, cat_seed)  # type: ignore[arg-type]
        hidden = generate_hidden_model(cat, config.m, model_seed)
        records.append(run_session(cat, hidden, config, session_seed, run_id))
    return ExperimentResult(config=config, records=tuple(records))


def run_strategy_sweep(config: SimConfig, strategies: Sequence[str] = STRATEGY_COLUMNS,
                       catalog: Catalog | None = None) -> dict[str, ExperimentResult]:
    """Run the same experiment under several strategies with shared seeds.

    Sharing the master seed pairs the runs: every strategy faces the same
    catalogs and hidden users.
    """
    results = {}
    for name in strategies:
        strategy = STRATEGY_ALIASES[name]
        results[name] = run_experiment(replace(config, strategy=strategy), catalog)
    return results


# ---------------------------------------------------------------------------
# CSV emission


def runs_to_csv(results: dict[str, ExperimentResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["run", "strategy", "discovered", "cycles", "found"])
    for result in results.values():
        for r in result.records:
            writer.writerow([r.run, r.strategy, r.discovered, r.cycles, int(r.found)])
    return buf.getvalue()


def aggregate_to_csv(rows: dict[str, dict[str, ExperimentResult]]) -> str:
    """Table-style aggregate: one row per configuration label, the six
    strategy columns in publication order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["config"] + list(STRATEGY_COLUMNS))
    for label, results in rows.items():
        row: list[str] = [label]
        for col in STRATEGY_COLUMNS:
            row.append(f"{results[col].mean_fraction_discovered:.3f}" if col in results else "")
        writer.writerow(row)
    return buf.getvalue()


def curves_to_csv(results: dict[str, ExperimentResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["strategy", "x", "fraction_runs_discovering_at_least_x"])
    for name, result in results.items():
        for x, frac in enumerate(result.discovery_curve()):
            writer.writerow([name, x, f"{frac:.4f}"])
    return buf.getvalue()
