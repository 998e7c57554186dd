"""Rubric configuration and prompt assembly for per-aspect grading.

Each essay is graded nine times, once per aspect, with a prompt built
from the same preface and output instructions plus the aspect's own
descriptor ladder.  Prompt assembly is pure string work with a fixed
layout, so the same configuration always yields byte-identical prompts
(and therefore stable cache keys).
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..corpus import ASPECTS, MAX_SCORE, RubricAspect
from ..errors import ConfigError


@dataclass(frozen=True)
class AspectRubric:
    aspect: RubricAspect
    name: str
    #: Descriptors for grades 3, 2, 1, 0, in that order.
    descriptors: tuple[str, str, str, str]
    extra_notes: str = ""
    source_summaries: tuple[str, ...] = ()


@dataclass(frozen=True)
class RubricConfig:
    grade_level: int
    preface: str
    grading_instructions: str
    output_instructions: str
    aspects: dict[RubricAspect, AspectRubric] = field(default_factory=dict)

    def __post_init__(self) -> None:
        missing = [a.value for a in ASPECTS if a not in self.aspects]
        if missing:
            raise ConfigError(f"rubric missing aspects: {', '.join(missing)}")


#: Grade labels for the descriptor ladder, highest first.
_GRADE_LABELS = ("3 if", "2 if", "1 if", "0 if")


def aspect_label(config: RubricConfig, aspect: RubricAspect) -> str:
    """The aspect line exactly as it appears in the prompt."""
    return f"{config.aspects[aspect].name.strip()}."


def build_prompt(config: RubricConfig, aspect: RubricAspect) -> str:
    """Assemble the grading instructions for one aspect.

    Layout: preface, aspect name, grading instructions, source
    summaries (if the aspect has them), the descriptor ladder from 3
    down to 0, extra notes, output instructions.  Blocks are separated
    by blank lines; absent optional blocks leave no trace.
    """
    ar = config.aspects[aspect]
    blocks: list[str] = [
        config.preface.strip(),
        aspect_label(config, aspect),
        config.grading_instructions.strip(),
    ]
    for summary in ar.source_summaries:
        blocks.append(summary.strip())
    ladder = "\n".join(
        f"{label}: {descriptor.strip()}"
        for label, descriptor in zip(_GRADE_LABELS, ar.descriptors)
    )
    blocks.append(ladder)
    if ar.extra_notes.strip():
        blocks.append(ar.extra_notes.strip())
    blocks.append(config.output_instructions.strip())
    return "\n\n".join(blocks)


def build_user_text(essay_text: str) -> str:
    """The essay is fenced in triple quotes so instructions and essay
    content cannot be confused."""
    return f'"""{essay_text}"""'


@dataclass(frozen=True)
class ParsedGrade:
    score: int | None
    failure: str | None
    raw: str

    @property
    def ok(self) -> bool:
        return self.score is not None


_MARKER = re.compile(r"hinne\s*:", re.IGNORECASE)
_INT = re.compile(r"-?\d+")


def parse_grade(response_text: str) -> ParsedGrade:
    """Extract the grade from a model response.

    The response ends with a `Hinne: N` marker; if the model repeated
    the marker while explaining itself, the last occurrence wins.
    """
    matches = list(_MARKER.finditer(response_text))
    if not matches:
        return ParsedGrade(None, "no_marker", response_text)
    tail = response_text[matches[-1].end():]
    m = _INT.search(tail)
    if not m:
        return ParsedGrade(None, "no_integer", response_text)
    value = int(m.group())
    if not 0 <= value <= MAX_SCORE:
        return ParsedGrade(None, "out_of_range", response_text)
    return ParsedGrade(value, None, response_text)


def _parse_rubric(text: str, source: str) -> RubricConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: not valid TOML: {exc}") from exc
    for key in ("grade_level", "preface", "grading_instructions", "output_instructions"):
        if key not in doc:
            raise ConfigError(f"{source}: missing {key!r}")
    if doc["grade_level"] not in (9, 12):
        raise ConfigError(f"{source}: grade_level must be 9 or 12")
    raw_aspects = doc.get("aspects")
    if not isinstance(raw_aspects, dict):
        raise ConfigError(f"{source}: missing [aspects.*] tables")
    aspects: dict[RubricAspect, AspectRubric] = {}
    by_key = {a.value: a for a in ASPECTS}
    for key, entry in raw_aspects.items():
        if key not in by_key:
            raise ConfigError(f"{source}: unknown aspect {key!r}")
        descriptors = []
        for grade in (3, 2, 1, 0):
            dkey = f"descriptor_{grade}"
            if dkey not in entry or not str(entry[dkey]).strip():
                raise ConfigError(f"{source}: aspect {key}: missing {dkey}")
            descriptors.append(str(entry[dkey]))
        name = str(entry.get("name", "")).strip()
        if not name:
            raise ConfigError(f"{source}: aspect {key}: missing name")
        aspects[by_key[key]] = AspectRubric(
            aspect=by_key[key],
            name=name,
            descriptors=tuple(descriptors),
            extra_notes=str(entry.get("extra_notes", "")),
            source_summaries=tuple(str(s) for s in entry.get("source_summaries", [])),
        )
    return RubricConfig(
        grade_level=doc["grade_level"],
        preface=str(doc["preface"]),
        grading_instructions=str(doc["grading_instructions"]),
        output_instructions=str(doc["output_instructions"]),
        aspects=aspects,
    )


def load_rubric(path: str | Path) -> RubricConfig:
    return _parse_rubric(Path(path).read_text(encoding="utf-8"), str(path))


def load_bundled_rubric(grade_level: int) -> RubricConfig:
    """The rubric configuration shipped with the package, one per cohort."""
    if grade_level not in (9, 12):
        raise ConfigError(f"no bundled rubric for grade level {grade_level!r}")
    name = f"rubric_grade{grade_level}.toml"
    text = resources.files("kirjand.data").joinpath(name).read_text(encoding="utf-8")
    return _parse_rubric(text, f"bundled {name}")
