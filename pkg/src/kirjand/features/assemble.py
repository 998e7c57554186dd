"""Combine the four feature families into one registry-ordered row."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..editlab import EditSet, error_features
from ..errors import InvariantError
from ..textproc import AnnotatedText
from .grammar import grammatical_features
from .lexical import lexical_features
from .registry import Registry
from .surface import surface_features


@dataclass
class FeatureRow:
    """All feature values for one essay, keyed and ordered by the registry."""

    values: dict[str, float]
    flags: list[str] = field(default_factory=list)

    def vector(self, names: tuple[str, ...]) -> list[float]:
        return [self.values[n] for n in names]


def assemble_features(
    annotated: AnnotatedText,
    edit_set: EditSet,
    freq_ranks: dict[str, int],
    abstractness: dict[str, float],
    registry: Registry,
) -> FeatureRow:
    computed: dict[str, float] = {}
    computed.update(surface_features(annotated))
    lex, flags = lexical_features(annotated, freq_ranks, abstractness)
    computed.update(lex)
    computed.update(grammatical_features(annotated))
    computed.update(error_features(edit_set))

    missing = [n for n in registry.names if n not in computed]
    if missing:
        raise InvariantError(f"registry names not computed: {', '.join(missing)}")
    row: dict[str, float] = {}
    for name in registry.names:
        value = float(computed[name])
        if not math.isfinite(value):
            raise InvariantError(f"feature {name} is not finite: {value}")
        row[name] = value
    return FeatureRow(values=row, flags=flags)
