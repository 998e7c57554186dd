"""Feature registry: the pinned inventory of predictor features.

The registry is a TOML file listing every feature with its category and
the language aspects it may be used to predict.  Cardinalities are part
of the contract and are enforced on load; a registry with the wrong
counts is refused outright rather than partially honoured.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..corpus import LANGUAGE_ASPECTS
from ..errors import ConfigError

CATEGORIES = ("Surface", "Lexical", "Grammatical", "Error")

EXPECTED_TOTAL = 108
EXPECTED_CATEGORY_COUNTS = {"Surface": 12, "Lexical": 20, "Grammatical": 53, "Error": 23}
EXPECTED_ASPECT_COUNTS = {
    "Punctuation": 6,
    "Orthography": 11,
    "Structuring": 11,
    "Vocabulary": 52,
    "Syntax": 62,
}


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    category: str
    aspects: tuple[str, ...]


@dataclass(frozen=True)
class Registry:
    features: tuple[FeatureSpec, ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def by_category(self, category: str) -> tuple[FeatureSpec, ...]:
        return tuple(f for f in self.features if f.category == category)

    def for_aspect(self, aspect: str) -> tuple[str, ...]:
        """Feature names associated with one language aspect, in registry order."""
        return tuple(f.name for f in self.features if aspect in f.aspects)

    def category_counts(self) -> dict[str, int]:
        counts = {c: 0 for c in CATEGORIES}
        for f in self.features:
            counts[f.category] += 1
        return counts

    def aspect_counts(self) -> dict[str, int]:
        counts = {a: 0 for a in EXPECTED_ASPECT_COUNTS}
        for f in self.features:
            for a in f.aspects:
                counts[a] += 1
        return counts


def _validate(features: list[FeatureSpec], source: str) -> Registry:
    names = [f.name for f in features]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise ConfigError(f"{source}: duplicate feature names: {', '.join(dupes)}")
    language_keys = {a.value for a in LANGUAGE_ASPECTS}
    for f in features:
        if f.category not in CATEGORIES:
            raise ConfigError(f"{source}: feature {f.name}: unknown category {f.category!r}")
        if not f.aspects:
            raise ConfigError(f"{source}: feature {f.name}: no aspect associations")
        bad = sorted(set(f.aspects) - language_keys)
        if bad:
            raise ConfigError(f"{source}: feature {f.name}: unknown aspects: {', '.join(bad)}")
    registry = Registry(tuple(features))
    if len(features) != EXPECTED_TOTAL:
        raise ConfigError(f"{source}: expected {EXPECTED_TOTAL} features, got {len(features)}")
    if registry.category_counts() != EXPECTED_CATEGORY_COUNTS:
        raise ConfigError(
            f"{source}: category counts {registry.category_counts()} "
            f"do not match {EXPECTED_CATEGORY_COUNTS}"
        )
    if registry.aspect_counts() != EXPECTED_ASPECT_COUNTS:
        raise ConfigError(
            f"{source}: aspect association counts {registry.aspect_counts()} "
            f"do not match {EXPECTED_ASPECT_COUNTS}"
        )
    return registry


def load_registry(path: str | Path | None = None) -> Registry:
    """Load and validate a registry file; None loads the bundled default."""
    if path is None:
        raw = resources.files("kirjand.data").joinpath("feature_registry.toml").read_bytes()
        source = "bundled feature_registry.toml"
    else:
        raw = Path(path).read_bytes()
        source = str(path)
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{source}: not valid TOML: {exc}") from exc
    entries = doc.get("feature")
    if not isinstance(entries, list) or not entries:
        raise ConfigError(f"{source}: no [[feature]] entries")
    features: list[FeatureSpec] = []
    for idx, entry in enumerate(entries):
        try:
            features.append(
                FeatureSpec(
                    name=str(entry["name"]),
                    category=str(entry["category"]),
                    aspects=tuple(str(a) for a in entry["aspects"]),
                )
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"{source}: feature entry {idx}: {exc!r}") from exc
    return _validate(features, source)
