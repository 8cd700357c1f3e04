import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefsearch.catalog import (AttributeSchema, Catalog, CatalogSpec, OptionRecord, ParseError,
                                SchemaError, ValidationError, attribute_range, catalog_from_csv,
                                catalog_from_json, catalog_to_csv, catalog_to_json,
                                generate_random_catalog, load_catalog, parse_attrs_spec,
                                parse_catalog_spec)
from prefsearch.fixtures import housing_catalog

HOUSING_CSV = """id,rent:numeric:400:800,type:qualitative:room|studio|apartment,distance:numeric:2:32,furnished:qualitative:yes|no
o1,400,room,17,yes
o2,500,room,32,yes
o3,600,apartment,14,no
o4,600,studio,5,no
o5,650,apartment,32,no
o6,700,studio,2,yes
o7,800,apartment,7,no
"""


class TestSchema:
    def test_numeric_needs_ordered_bounds(self):
        with pytest.raises(SchemaError):
            AttributeSchema.numeric("x", 5, 5)

    def test_qualitative_rejects_duplicates(self):
        with pytest.raises(SchemaError):
            AttributeSchema.qualitative("t", ("a", "a"))

    def test_value_prior_must_sum_to_one(self):
        with pytest.raises(SchemaError):
            AttributeSchema.qualitative("t", ("a", "b"), value_prior={"a": 0.7, "b": 0.7})
        ok = AttributeSchema.qualitative("t", ("a", "b"), value_prior={"a": 0.3, "b": 0.7})
        assert ok.uniform_value_prior() == {"a": 0.3, "b": 0.7}

    def test_prior_weight_range(self):
        with pytest.raises(SchemaError):
            AttributeSchema.numeric("x", 0, 1, prior_weight=1.5)


class TestLoadCatalog:
    def test_housing_csv(self):
        cat = catalog_from_csv(HOUSING_CSV)
        assert cat.n == 7 and cat.k == 4
        assert cat.option("o4").values["type"] == "studio"
        assert cat.option("o2").values["rent"] == 500.0

    def test_housing_json_roundtrip_equals_fixture(self):
        fixture = housing_catalog()
        again = catalog_from_json(catalog_to_json(fixture))
        assert again == fixture

    def test_empty_options_section(self):
        cat = catalog_from_json({"schema": [{"name": "x", "kind": "numeric", "lo": 0, "hi": 1}],
                                 "options": []})
        assert cat.n == 0 and cat.k == 1

    def test_out_of_domain_label_rejected(self):
        data = catalog_to_json(housing_catalog())
        data["options"][2]["values"]["type"] = "castle"
        with pytest.raises(ValidationError) as err:
            catalog_from_json(data)
        assert "o3" in str(err.value) and "type" in str(err.value)

    def test_duplicate_id_rejected(self):
        data = catalog_to_json(housing_catalog())
        data["options"][1]["id"] = "o1"
        with pytest.raises(ValidationError, match="duplicate"):
            catalog_from_json(data)

    def test_malformed_json_reports_position(self):
        with pytest.raises(ParseError, match="line"):
            load_catalog(io.StringIO("{ nope"), fmt="json")

    def test_malformed_csv_reports_line(self):
        bad = HOUSING_CSV.replace("o5,650,apartment,32,no", "o5,650,apartment")
        with pytest.raises(ParseError, match="line 6"):
            catalog_from_csv(bad)

    def test_load_from_path_infers_format(self, tmp_path):
        p = tmp_path / "cat.csv"
        p.write_text(HOUSING_CSV)
        assert load_catalog(str(p)).n == 7

    def test_stream_load(self):
        raw = json.dumps(catalog_to_json(housing_catalog())).encode()
        assert load_catalog(io.BytesIO(raw)).n == 7


class TestRoundTrip:
    def test_csv_roundtrip(self):
        cat = catalog_from_csv(HOUSING_CSV)
        assert catalog_from_csv(catalog_to_csv(cat)) == cat

    def test_json_roundtrip_preserves_priors(self):
        schema = [AttributeSchema.qualitative("t", ("a", "b"), prior_weight=0.25,
                                              value_prior={"a": 0.9, "b": 0.1})]
        cat = Catalog(schema, [OptionRecord("o1", {"t": "a"})])
        again = catalog_from_json(catalog_to_json(cat))
        assert again.attribute("t").prior_weight == 0.25
        assert again.attribute("t").value_prior == {"a": 0.9, "b": 0.1}

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000), n=st.integers(1, 12))
    def test_random_catalog_json_roundtrip(self, seed, n):
        spec = CatalogSpec(n=n, attributes=parse_attrs_spec("2int+1qual+1ord"))
        cat = generate_random_catalog(spec, seed)
        assert catalog_from_json(catalog_to_json(cat)) == cat


class TestGenerateRandom:
    def test_shape_and_domains(self):
        spec = CatalogSpec(n=50, attributes=parse_attrs_spec("9int"))
        cat = generate_random_catalog(spec, 1)
        assert cat.n == 50 and cat.k == 9
        for a in cat.schema:
            col = cat.column(a.name)
            assert col.min() >= a.lo and col.max() <= a.hi

    def test_deterministic_in_seed(self):
        spec = CatalogSpec(n=50, attributes=parse_attrs_spec("9int"))
        assert generate_random_catalog(spec, 1) == generate_random_catalog(spec, 1)
        assert generate_random_catalog(spec, 1) != generate_random_catalog(spec, 2)

    def test_mixed_domains(self):
        spec = parse_catalog_spec("rand-200x5int+2qual+2ord")
        cat = generate_random_catalog(spec, 7)
        assert cat.n == 200 and cat.k == 9
        kinds = [a.kind for a in cat.schema]
        assert kinds.count("qualitative") == 2

    def test_degenerate_domain_rejected(self):
        with pytest.raises(SchemaError):
            CatalogSpec(n=5, attributes=(AttributeSchema.qualitative("q", ("only",)),))


class TestAttributeRange:
    def test_declared_domain_not_observed_spread(self, housing):
        # Observed distances span 2..32 too, but the contract is the declared domain.
        assert attribute_range(housing, "distance") == 30.0

    def test_unit_range(self):
        cat = Catalog([AttributeSchema.numeric("u", 0, 1)], [])
        assert attribute_range(cat, "u") == 1.0

    def test_qualitative_raises_type_error(self, housing):
        with pytest.raises(TypeError):
            attribute_range(housing, "type")


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), row=st.integers(0, 6), col=st.integers(0, 3),
       data=st.data())
def test_any_single_out_of_domain_mutation_is_rejected(seed, row, col, data):
    base = catalog_to_json(housing_catalog())
    attr = base["schema"][col]
    entry = base["options"][row]["values"]
    if attr["kind"] == "numeric":
        offset = data.draw(st.sampled_from([-1.0, 1.0]))
        entry[attr["name"]] = (attr["lo"] if offset < 0 else attr["hi"]) + offset
    else:
        entry[attr["name"]] = "not-a-legal-label"
    with pytest.raises(ValidationError):
        catalog_from_json(base)
