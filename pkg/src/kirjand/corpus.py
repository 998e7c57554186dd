"""Essay corpus data model and JSONL I/O.

An essay record carries the full text plus two independent human score
sheets over the nine-aspect rubric.  Aspect scores are integers on a
0..3 scale; the consensus sheet averages the two raters exactly, so it
lives on a half-point grid and is kept as `fractions.Fraction`.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from .errors import CorpusError


class RubricAspect(enum.Enum):
    """The nine graded aspects, in canonical rubric order.

    The string values double as the aspect keys in corpus files and
    score tables, so their spelling is part of the file contract.
    """

    TITLE_INTRO = "TitleIntro"
    ARGUMENT_DEVELOPMENT = "ArgumentDevelopment"
    SOURCE_USE = "SourceUse"
    CONCLUSION = "Conclusion"
    VOCABULARY = "Vocabulary"
    SYNTAX = "Syntax"
    ORTHOGRAPHY = "Orthography"
    PUNCTUATION = "Punctuation"
    STRUCTURING = "Structuring"

    @property
    def index(self) -> int:
        return _ASPECT_INDEX[self]


ASPECTS: tuple[RubricAspect, ...] = tuple(RubricAspect)
_ASPECT_INDEX = {a: i for i, a in enumerate(ASPECTS)}

# The five language aspects are the ones the regression route predicts;
# the first four require reading comprehension and stay LLM-only.
LANGUAGE_ASPECTS: tuple[RubricAspect, ...] = ASPECTS[4:]

MIN_SCORE = 0
MAX_SCORE = 3
MAX_TOTAL = MAX_SCORE * len(ASPECTS)


@dataclass(frozen=True)
class AspectScores:
    """One rater's integer scores, one per aspect in canonical order."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(ASPECTS):
            raise CorpusError(
                f"expected {len(ASPECTS)} aspect scores, got {len(self.values)}"
            )
        for aspect, v in zip(ASPECTS, self.values):
            if not isinstance(v, int) or isinstance(v, bool):
                raise CorpusError(f"score for {aspect.value} is not an integer: {v!r}")
            if not MIN_SCORE <= v <= MAX_SCORE:
                raise CorpusError(
                    f"score for {aspect.value} out of range {MIN_SCORE}..{MAX_SCORE}: {v}"
                )

    @classmethod
    def from_mapping(cls, m: Mapping[str, int]) -> "AspectScores":
        missing = [a.value for a in ASPECTS if a.value not in m]
        if missing:
            raise CorpusError(f"missing aspect scores: {', '.join(missing)}")
        extra = sorted(set(m) - {a.value for a in ASPECTS})
        if extra:
            raise CorpusError(f"unknown aspect keys: {', '.join(extra)}")
        return cls(tuple(m[a.value] for a in ASPECTS))

    def to_mapping(self) -> dict[str, int]:
        return {a.value: v for a, v in zip(ASPECTS, self.values)}

    def __getitem__(self, aspect: RubricAspect) -> int:
        return self.values[aspect.index]

    @property
    def total(self) -> int:
        return sum(self.values)


@dataclass(frozen=True)
class ConsensusScores:
    """Exact per-aspect mean of the two raters; values sit on a 1/2 grid."""

    values: tuple[Fraction, ...]

    def __getitem__(self, aspect: RubricAspect) -> Fraction:
        return self.values[aspect.index]

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))


@dataclass(frozen=True)
class EssayRecord:
    essay_id: str
    grade_level: int
    text: str
    scores_g1: AspectScores
    scores_g2: AspectScores
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.grade_level not in (9, 12):
            raise CorpusError(f"grade_level must be 9 or 12, got {self.grade_level!r}")
        if not self.essay_id:
            raise CorpusError("essay_id must be non-empty")

    def to_json_dict(self) -> dict:
        d = {
            "id": self.essay_id,
            "grade": self.grade_level,
            "text": self.text,
            "scores_g1": self.scores_g1.to_mapping(),
            "scores_g2": self.scores_g2.to_mapping(),
        }
        if self.meta:
            d["meta"] = dict(self.meta)
        return d

    @classmethod
    def from_json_dict(cls, d: Mapping) -> "EssayRecord":
        for key in ("id", "grade", "text", "scores_g1", "scores_g2"):
            if key not in d:
                raise CorpusError(f"missing field {key!r}")
        if not isinstance(d["text"], str):
            raise CorpusError("text must be a string")
        for key in ("scores_g1", "scores_g2"):
            if not isinstance(d[key], Mapping):
                raise CorpusError(f"{key} must be an object of aspect scores")
        return cls(
            essay_id=str(d["id"]),
            grade_level=d["grade"],
            text=d["text"],
            scores_g1=AspectScores.from_mapping(d["scores_g1"]),
            scores_g2=AspectScores.from_mapping(d["scores_g2"]),
            meta=dict(d.get("meta", {})),
        )


def consensus(record: EssayRecord) -> ConsensusScores:
    """Average the two human sheets aspect-wise with exact arithmetic."""
    return ConsensusScores(
        tuple(
            Fraction(g1 + g2, 2)
            for g1, g2 in zip(record.scores_g1.values, record.scores_g2.values)
        )
    )


# Component weights of the final-exam composite mark used at grade 12.
# Each component is judged on levels 1..5, so the composite spans 12..60.
WEIGHTED_COMPONENTS: dict[str, int] = {
    "content": 5,
    "language": 4,
    "style": 2,
    "structure": 1,
}


def weighted_total_12(levels: Mapping[str, int]) -> int:
    missing = [k for k in WEIGHTED_COMPONENTS if k not in levels]
    if missing:
        raise CorpusError(f"missing component levels: {', '.join(missing)}")
    extra = sorted(set(levels) - set(WEIGHTED_COMPONENTS))
    if extra:
        raise CorpusError(f"unknown component levels: {', '.join(extra)}")
    for name, level in levels.items():
        if not isinstance(level, int) or isinstance(level, bool) or not 1 <= level <= 5:
            raise CorpusError(f"component {name} level must be an integer 1..5: {level!r}")
    return sum(WEIGHTED_COMPONENTS[name] * levels[name] for name in WEIGHTED_COMPONENTS)


@dataclass(frozen=True)
class SkippedRecord:
    line_no: int
    essay_id: str | None
    reason: str


@dataclass
class CorpusLoadResult:
    records: list[EssayRecord]
    skipped: list[SkippedRecord]

    @property
    def skip_count(self) -> int:
        return len(self.skipped)


def load_corpus(path: str | Path, grade_level: int | None = None) -> CorpusLoadResult:
    """Read a JSONL corpus, keeping valid records and reporting the rest.

    Records that fail validation (malformed JSON, missing or out-of-range
    scores, a missing second rater) are skipped and reported, never
    silently dropped.  A duplicate essay id is a hard error: it means two
    different texts could silently share score rows downstream.
    """
    path = Path(path)
    records: list[EssayRecord] = []
    skipped: list[SkippedRecord] = []
    seen: dict[str, int] = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
    # Split on \n only: splitlines() would also break on U+0085/U+2028,
    # which are legal raw characters inside JSON strings.
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            skipped.append(SkippedRecord(line_no, None, f"bad json: {exc.msg}"))
            continue
        if not isinstance(raw, dict):
            skipped.append(SkippedRecord(line_no, None, "record is not an object"))
            continue
        essay_id = str(raw.get("id", "")) or None
        try:
            record = EssayRecord.from_json_dict(raw)
        except CorpusError as exc:
            skipped.append(SkippedRecord(line_no, essay_id, str(exc)))
            continue
        if record.essay_id in seen:
            raise CorpusError(
                f"duplicate essay id {record.essay_id!r} at lines "
                f"{seen[record.essay_id]} and {line_no}"
            )
        seen[record.essay_id] = line_no
        if grade_level is not None and record.grade_level != grade_level:
            skipped.append(
                SkippedRecord(line_no, record.essay_id, f"grade_level {record.grade_level} filtered out")
            )
            continue
        records.append(record)
    return CorpusLoadResult(records, skipped)


def dump_corpus(records: Iterable[EssayRecord], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json_dict(), ensure_ascii=False) + "\n")
