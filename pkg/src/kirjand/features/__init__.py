from .assemble import FeatureRow, assemble_features
from .grammar import grammatical_features
from .lexical import lexical_features, load_abstractness, load_frequency_list, mtld
from .registry import (
    EXPECTED_ASPECT_COUNTS,
    EXPECTED_CATEGORY_COUNTS,
    EXPECTED_TOTAL,
    FeatureSpec,
    Registry,
    load_registry,
)
from .surface import surface_features

__all__ = [
    "FeatureRow",
    "FeatureSpec",
    "Registry",
    "EXPECTED_ASPECT_COUNTS",
    "EXPECTED_CATEGORY_COUNTS",
    "EXPECTED_TOTAL",
    "assemble_features",
    "grammatical_features",
    "lexical_features",
    "load_abstractness",
    "load_frequency_list",
    "load_registry",
    "mtld",
    "surface_features",
]
