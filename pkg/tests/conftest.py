from __future__ import annotations

import numpy as np
import pytest

from prefsearch.catalog import AttributeSchema, Catalog, CatalogSpec, generate_random_catalog
from prefsearch.fixtures import cheaper_model, golden_suggestion_config, housing_catalog
from prefsearch.preferences import (Directional, Peaked, PreferenceModel, QualitativeValue,
                                    Threshold)


@pytest.fixture(scope="session")
def housing() -> Catalog:
    return housing_catalog()


@pytest.fixture()
def cheaper() -> PreferenceModel:
    return cheaper_model()


@pytest.fixture()
def golden_config():
    return golden_suggestion_config()


def random_model(catalog: Catalog, rng: np.random.Generator, m: int) -> PreferenceModel:
    """A random valid preference model over distinct attributes."""
    picks = rng.choice(catalog.k, size=min(m, catalog.k), replace=False)
    prefs = []
    for i in picks:
        schema = catalog.schema[i]
        weight = int(rng.integers(1, 6))
        if not schema.is_numeric:
            theta = schema.values[int(rng.integers(0, len(schema.values)))]
            prefs.append(QualitativeValue(attr=schema.name, weight=weight, theta=theta))
            continue
        kind = rng.integers(0, 3)
        if kind == 0:
            direction = "smaller_better" if rng.random() < 0.5 else "larger_better"
            prefs.append(Directional(attr=schema.name, weight=weight, direction=direction))
        elif kind == 1:
            polarity = "less_than" if rng.random() < 0.5 else "greater_than"
            prefs.append(Threshold(attr=schema.name, weight=weight, polarity=polarity,
                                   theta=float(rng.uniform(schema.lo, schema.hi)),
                                   tolerance=float(rng.uniform(0, 0.3 * schema.range))))
        else:
            prefs.append(Peaked(attr=schema.name, weight=weight,
                                theta=float(rng.uniform(schema.lo, schema.hi)),
                                tolerance=float(rng.uniform(0.05, 0.5)) * schema.range))
    return PreferenceModel(tuple(prefs))


def random_catalog(rng: np.random.Generator, n: int, k_numeric: int = 3,
                   k_qual: int = 1, discrete: bool = False) -> Catalog:
    attrs = [AttributeSchema.numeric(f"x{i}", 0, 100, discrete=discrete) for i in range(k_numeric)]
    attrs += [AttributeSchema.qualitative(f"q{i}", ("a", "b", "c", "d")) for i in range(k_qual)]
    spec = CatalogSpec(n=n, attributes=tuple(attrs))
    return generate_random_catalog(spec, int(rng.integers(0, 2**31)))
