"""Built-in catalogs used by tests, demos, and the simulation harness."""

from __future__ import annotations

from .catalog import (AttributeSchema, Catalog, CatalogSpec, OptionRecord,
                      generate_random_catalog)
from .preferences import Directional, PreferenceModel
from .suggest import SuggestionConfig

_HOUSING_ROWS = [
    ("o1", 400, "room", 17, "yes"),
    ("o2", 500, "room", 32, "yes"),
    ("o3", 600, "apartment", 14, "no"),
    ("o4", 600, "studio", 5, "no"),
    ("o5", 650, "apartment", 32, "no"),
    ("o6", 700, "studio", 2, "yes"),
    ("o7", 800, "apartment", 7, "no"),
]


def housing_catalog() -> Catalog:
    """Seven student-housing offers over rent / type / distance / furnished.

    Distance is declared on [2, 32] (width 30); rent on [400, 800].
    """
    schema = [
        AttributeSchema.numeric("rent", 400, 800),
        AttributeSchema.qualitative("type", ("room", "studio", "apartment")),
        AttributeSchema.numeric("distance", 2, 32),
        AttributeSchema.qualitative("furnished", ("yes", "no")),
    ]
    options = [
        OptionRecord(id=oid, values={"rent": rent, "type": typ, "distance": dist, "furnished": fur})
        for oid, rent, typ, dist, fur in _HOUSING_ROWS
    ]
    return Catalog(schema, options)


def cheaper_model(weight: int = 1) -> PreferenceModel:
    """The single stated preference of the worked example: lower rent."""
    return PreferenceModel((Directional(attr="rent", weight=weight, direction="smaller_better"),))


def golden_suggestion_config(**overrides) -> SuggestionConfig:
    """Scoring configuration that reproduces the worked example's numbers.

    The accommodation-type prior is pinned to 0.5 for the two values that
    matter there (a uniform prior over three values would give 1/3).
    """
    base = dict(
        strategy="prob_joint",
        criterion="pareto",
        value_priors={"type": {"room": 0.0, "studio": 0.5, "apartment": 0.5}},
    )
    base.update(overrides)
    return SuggestionConfig(**base)


def listing_catalog() -> Catalog:
    """A 160-option synthetic accommodation listing with 10 attributes.

    Stands in for the live university database behind the original service;
    generated deterministically so results are reproducible.
    """
    schema = (
        AttributeSchema.qualitative(
            "type", ("room_family", "room_shared", "studio", "apartment")),
        AttributeSchema.numeric("rent", 200, 1200, discrete=True),
        AttributeSchema.numeric("rooms", 1, 5, discrete=True),
        AttributeSchema.qualitative("furnished", ("yes", "no")),
        AttributeSchema.qualitative("bathroom", ("private", "shared")),
        AttributeSchema.qualitative("kitchen", ("private", "shared")),
        AttributeSchema.qualitative("transport", ("none", "bus", "subway", "train")),
        AttributeSchema.numeric("dist_university", 1, 60, discrete=True),
        AttributeSchema.numeric("dist_center", 1, 45, discrete=True),
        AttributeSchema.numeric("size_sqm", 10, 120, discrete=True),
    )
    return generate_random_catalog(CatalogSpec(n=160, attributes=schema), seed=20_06)
