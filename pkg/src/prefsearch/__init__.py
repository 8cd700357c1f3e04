"""Example-critiquing preference search with model-based suggestions."""

from .catalog import (AttributeSchema, Catalog, CatalogError, CatalogSpec, OptionRecord,
                      ParseError, SchemaError, ValidationError, attribute_range,
                      generate_random_catalog, load_catalog, save_catalog)
from .dominance import DominanceIndex, DominatorBounds, build_dominance_index, dominator_bounds
from .preferences import (Directional, EmptyModelError, Peaked, Preference, PreferenceError,
                          PreferenceModel, QualitativeValue, Threshold, compare,
                          model_from_json, model_to_json, pareto_dominates,
                          top_k_candidates, utilities, utility)
from .suggest import (AllPreferencesStatedError, SuggestionConfig, SuggestionScore,
                      counting_scores, delta_directional, delta_peaked, delta_qualitative,
                      delta_threshold, group_opt_probability, probabilistic_scores,
                      select_suggestions)

__version__ = "0.1.0"
