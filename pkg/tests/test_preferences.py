import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefsearch.catalog import AttributeSchema, Catalog, OptionRecord
from prefsearch.preferences import (Directional, EmptyModelError, Peaked, PreferenceError,
                                    PreferenceModel, QualitativeValue, Threshold, compare,
                                    model_from_json, model_to_json, pareto_dominates,
                                    top_k_candidates, utilities, utility)

from conftest import random_catalog, random_model


@pytest.fixture()
def surface_catalog():
    schema = [AttributeSchema.numeric("surface", 0, 60)]
    options = [OptionRecord(f"s{i}", {"surface": v}) for i, v in
               enumerate([20.0, 25.0, 27.5, 30.0, 40.0, 52.5, 56.0])]
    return Catalog(schema, options)


class TestCost:
    def test_threshold_greater_than_halfway_up_the_ramp(self, surface_catalog):
        # Surface of at least 30 with 5 units of tolerance: 27.5 costs 0.5.
        pref = Threshold(attr="surface", polarity="greater_than", theta=30, tolerance=5)
        assert pref.cost(surface_catalog.option("s2"), surface_catalog) == 0.5
        assert pref.cost(surface_catalog.option("s3"), surface_catalog) == 0.0
        assert pref.cost(surface_catalog.option("s0"), surface_catalog) == 1.0

    def test_peaked_apex_costs_zero(self, housing):
        pref = Peaked(attr="distance", theta=14, tolerance=3)
        assert pref.cost(housing.option("o3"), housing) == 0.0

    def test_threshold_saturates_beyond_tolerance(self, surface_catalog):
        pref = Threshold(attr="surface", polarity="less_than", theta=25, tolerance=2.5)
        # theta + 2t saturates: min(1, 2) = 1
        assert pref.cost(surface_catalog.option("s3"), surface_catalog) == 1.0

    def test_step_threshold_is_right_continuous(self, housing):
        pref = Threshold(attr="rent", polarity="less_than", theta=600, tolerance=0)
        assert pref.cost(housing.option("o4"), housing) == 0.0  # at the threshold
        assert pref.cost(housing.option("o5"), housing) == 1.0  # strictly above

    def test_two_sided_band_from_two_thresholds(self, surface_catalog):
        # At-least-30 and at-most-50, each with tolerance 5.
        lo = Threshold(attr="surface", polarity="greater_than", theta=30, tolerance=5)
        hi = Threshold(attr="surface", polarity="less_than", theta=50, tolerance=5)
        model = PreferenceModel((lo, hi))
        costs = model.cost_matrix(surface_catalog).sum(axis=0)
        expected = [1.0, 1.0, 0.5, 0.0, 0.0, 0.5, 1.0]
        assert costs == pytest.approx(expected)

    def test_kind_mismatch_raises_type_error(self, housing):
        with pytest.raises(TypeError):
            QualitativeValue(attr="rent", theta="cheap").cost(housing.option("o1"), housing)
        with pytest.raises(TypeError):
            Directional(attr="type").cost(housing.option("o1"), housing)

    def test_theta_outside_domain_rejected(self, housing):
        with pytest.raises(PreferenceError):
            Threshold(attr="rent", polarity="less_than", theta=9000).validate(
                housing.attribute("rent"))

    def test_weight_must_be_integer_1_to_5(self):
        with pytest.raises(PreferenceError):
            Directional(attr="rent", weight=0)
        with pytest.raises(PreferenceError):
            Directional(attr="rent", weight=6)

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_costs_always_in_unit_interval(self, seed):
        rng = np.random.default_rng(seed)
        cat = random_catalog(rng, n=15)
        model = random_model(cat, rng, m=3)
        costs = model.cost_matrix(cat)
        assert (costs >= 0).all() and (costs <= 1).all()


class TestCompare:
    def test_cheaper_orders_housing(self, housing):
        pref = Directional(attr="rent", direction="smaller_better")
        assert compare(pref, housing.option("o1"), housing.option("o2"), housing) == "better"
        assert compare(pref, housing.option("o2"), housing.option("o1"), housing) == "worse"

    def test_reflexive_equal(self, housing):
        pref = Directional(attr="rent", direction="smaller_better")
        assert compare(pref, housing.option("o3"), housing.option("o3"), housing) == "equal"

    def test_qualitative_value_prefers_match(self, housing):
        pref = QualitativeValue(attr="type", theta="studio")
        assert compare(pref, housing.option("o4"), housing.option("o3"), housing) == "better"

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_total_preorder_on_random_triples(self, seed):
        rng = np.random.default_rng(seed)
        cat = random_catalog(rng, n=9)
        model = random_model(cat, rng, m=2)
        pref = model.preferences[0]
        a, b, c = (cat.options[i] for i in rng.integers(0, cat.n, size=3))
        rel_ab = compare(pref, a, b, cat)
        rel_ba = compare(pref, b, a, cat)
        flipped = {"better": "worse", "worse": "better", "equal": "equal"}
        assert rel_ba == flipped[rel_ab]
        # transitivity of "not worse"
        if compare(pref, a, b, cat) != "worse" and compare(pref, b, c, cat) != "worse":
            assert compare(pref, a, c, cat) != "worse"


class TestUtility:
    def test_cheapest_option_maximizes_single_pref_utility(self, housing, cheaper):
        values = {o.id: utility(cheaper, o, housing) for o in housing.options}
        assert values["o1"] == pytest.approx(1.0)
        assert max(values, key=values.get) == "o1"

    def test_all_satisfied_step_preferences_sum_weights(self, housing):
        model = PreferenceModel((
            Threshold(attr="rent", polarity="less_than", theta=700, tolerance=0, weight=4),
            QualitativeValue(attr="furnished", theta="no", weight=2),
        ))
        assert utility(model, housing.option("o3"), housing) == pytest.approx(6.0)

    def test_min_combinator_collapses_a_dominated_pair(self):
        # Costs (0.7, 0.5, 0.3) vs (0.7, 0.6, 0.6): the first dominates, yet
        # the min of the satisfactions ties at 0.3.
        schema = [AttributeSchema.numeric(f"c{i}", 0, 1) for i in range(3)]
        u = OptionRecord("u", {"c0": 0.7, "c1": 0.5, "c2": 0.3})
        v = OptionRecord("v", {"c0": 0.7, "c1": 0.6, "c2": 0.6})
        cat = Catalog(schema, [u, v])
        prefs = tuple(Directional(attr=f"c{i}", direction="smaller_better") for i in range(3))
        weighted = PreferenceModel(prefs)
        flat = PreferenceModel(prefs, combinator="min")
        assert pareto_dominates(weighted, cat.option("u"), cat.option("v"), cat)
        assert utility(flat, cat.option("u"), cat) == pytest.approx(0.3)
        assert utility(flat, cat.option("u"), cat) == pytest.approx(
            utility(flat, cat.option("v"), cat))
        # weighted sum keeps the dominance visible
        assert utility(weighted, cat.option("u"), cat) > utility(weighted, cat.option("v"), cat)

    def test_empty_model_raises(self, housing):
        with pytest.raises(EmptyModelError):
            utility(PreferenceModel(()), housing.option("o1"), housing)

    def test_utilities_matches_scalar(self, housing, cheaper):
        vec = utilities(cheaper, housing)
        for i, o in enumerate(housing.options):
            assert vec[i] == pytest.approx(utility(cheaper, o, housing))


class TestParetoDominates:
    def test_cheaper_dominates(self, housing, cheaper):
        assert pareto_dominates(cheaper, housing.option("o1"), housing.option("o2"), housing)
        assert not pareto_dominates(cheaper, housing.option("o2"), housing.option("o1"), housing)

    def test_irreflexive(self, housing, cheaper):
        assert not pareto_dominates(cheaper, housing.option("o5"), housing.option("o5"), housing)

    def test_equal_rents_do_not_dominate(self, housing, cheaper):
        assert not pareto_dominates(cheaper, housing.option("o3"), housing.option("o4"), housing)
        assert not pareto_dominates(cheaper, housing.option("o4"), housing.option("o3"), housing)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_weighted_sum_is_dominance_preserving(self, seed):
        rng = np.random.default_rng(seed)
        cat = random_catalog(rng, n=12)
        model = random_model(cat, rng, m=3)
        i, j = rng.integers(0, cat.n, size=2)
        o1, o2 = cat.options[i], cat.options[j]
        if pareto_dominates(model, o1, o2, cat):
            assert utility(model, o1, cat) > utility(model, o2, cat)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_pareto_optimality_is_monotone_under_model_growth(self, seed):
        # An untied Pareto-optimal option stays optimal when a preference is added.
        rng = np.random.default_rng(seed)
        cat = random_catalog(rng, n=10)
        model = random_model(cat, rng, m=2)
        grown = random_model(cat, rng, m=3)
        extra = next((p for p in grown.preferences
                      if all(q.attr != p.attr for q in model.preferences)), None)
        if extra is None:
            return
        bigger = model.with_preference(extra)
        for o in cat.options:
            dominated = any(pareto_dominates(model, other, o, cat) for other in cat.options)
            tied = any(o2.id != o.id and not pareto_dominates(model, o2, o, cat)
                       and not pareto_dominates(model, o, o2, cat)
                       and all(compare(p, o, o2, cat) == "equal" for p in model.preferences)
                       for o2 in cat.options)
            if not dominated and not tied:
                assert not any(pareto_dominates(bigger, other, o, cat) for other in cat.options)


class TestTopK:
    def test_k1_shows_only_the_cheapest(self, housing, cheaper):
        assert [o.id for o in top_k_candidates(cheaper, housing, 1)] == ["o1"]

    def test_k_at_least_n_returns_total_order(self, housing, cheaper):
        ids = [o.id for o in top_k_candidates(cheaper, housing, 99)]
        assert ids == ["o1", "o2", "o3", "o4", "o5", "o6", "o7"]

    def test_tie_broken_by_ascending_id(self, housing, cheaper):
        assert [o.id for o in top_k_candidates(cheaper, housing, 3)] == ["o1", "o2", "o3"]


class TestExchangeFormat:
    def test_roundtrip_all_variants(self):
        model = PreferenceModel((
            QualitativeValue(attr="type", theta="studio", weight=2),
            Directional(attr="rent", direction="smaller_better", weight=5),
            Threshold(attr="distance", polarity="less_than", theta=10, tolerance=1.5, weight=4),
            Peaked(attr="distance", theta=14, tolerance=3, weight=1),
        ))
        again = model_from_json(model_to_json(model))
        assert again == model

    def test_unknown_variant_rejected(self):
        with pytest.raises(PreferenceError):
            model_from_json([{"attr": "x", "variant": "psychic", "weight": 1}])

    def test_one_directional_per_attribute(self):
        with pytest.raises(PreferenceError):
            PreferenceModel((Directional(attr="rent"), Directional(attr="rent",
                                                                   direction="larger_better")))
