"""Agreement metrics between model scores and two human raters.

Everything here is computed with exact rational arithmetic; floats only
appear at the last step (square roots and tail probabilities).  Model
sheets missing any aspect are excluded from total-based metrics and
reported separately instead of silently biasing the averages.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from scipy.special import stdtr

from .corpus import ASPECTS, MAX_SCORE, EssayRecord, RubricAspect, consensus
from .errors import ValidationError

Rational = int | Fraction


def mae(pairs: Iterable[tuple[Rational, Rational]]) -> Fraction:
    total = Fraction(0)
    count = 0
    for a, b in pairs:
        total += abs(Fraction(a) - Fraction(b))
        count += 1
    if count == 0:
        raise ValidationError("mae needs at least one pair")
    return total / count


def normalized_accuracy(mae_value: Rational, scale: Rational) -> Fraction:
    """Error turned into a percentage: 100 at zero error, 0 at the
    worst possible error on the given scale."""
    if Fraction(scale) <= 0:
        raise ValidationError(f"scale must be positive, got {scale}")
    return (1 - Fraction(mae_value) / Fraction(scale)) * 100


def out_of_range_distance(model: Rational, h1: Rational, h2: Rational) -> Fraction:
    """How far a model score falls outside the two raters' interval."""
    m = Fraction(model)
    lo, hi = min(Fraction(h1), Fraction(h2)), max(Fraction(h1), Fraction(h2))
    return max(Fraction(0), lo - m, m - hi)


def in_range(model: Rational, h1: Rational, h2: Rational) -> bool:
    return out_of_range_distance(model, h1, h2) == 0


def in_range_total_pct(triples: Iterable[tuple[Rational, Rational, Rational]]) -> Fraction:
    """Percentage of essays whose model total lands between the raters'
    totals (inclusive)."""
    hits = 0
    count = 0
    for m, lo_total, hi_total in triples:
        count += 1
        if in_range(m, lo_total, hi_total):
            hits += 1
    if count == 0:
        raise ValidationError("in_range_total_pct needs at least one essay")
    return Fraction(100 * hits, count)


def human_mad(pairs: Iterable[tuple[int, int]]) -> Fraction:
    """Mean distance of each rater from their shared mean: |g1 - g2| / 2."""
    total = Fraction(0)
    count = 0
    for g1, g2 in pairs:
        total += Fraction(abs(g1 - g2), 2)
        count += 1
    if count == 0:
        raise ValidationError("human_mad needs at least one pair")
    return total / count


def lenient_harsh_totals(record: EssayRecord) -> tuple[int, int]:
    """The plausible total range: aspect-wise min and max over the two
    raters, summed.  Wider than the raters' own totals whenever they
    disagree in opposite directions on different aspects."""
    lo = sum(min(a, b) for a, b in zip(record.scores_g1.values, record.scores_g2.values))
    hi = sum(max(a, b) for a, b in zip(record.scores_g1.values, record.scores_g2.values))
    return lo, hi


# --- model score sheets ------------------------------------------------


@dataclass
class ModelSheet:
    essay_id: str
    scores: dict[RubricAspect, int] = field(default_factory=dict)

    @property
    def is_complete(self) -> bool:
        return len(self.scores) == len(ASPECTS)

    @property
    def total(self) -> int:
        if not self.is_complete:
            raise ValidationError(f"sheet for {self.essay_id} is incomplete")
        return sum(self.scores.values())


@dataclass
class ScoreSheetSet:
    model_id: str
    sheets: dict[str, ModelSheet] = field(default_factory=dict)

    def add_score(self, essay_id: str, aspect: RubricAspect, score: int) -> None:
        if not 0 <= score <= MAX_SCORE:
            raise ValidationError(f"score {score} out of range for {essay_id}/{aspect.value}")
        sheet = self.sheets.setdefault(essay_id, ModelSheet(essay_id))
        if aspect in sheet.scores:
            raise ValidationError(f"duplicate score for {essay_id}/{aspect.value}")
        sheet.scores[aspect] = score

    def complete_sheets(self) -> dict[str, ModelSheet]:
        return {eid: s for eid, s in self.sheets.items() if s.is_complete}


SCORE_CSV_HEADER = ["essay_id", "aspect", "score", "source"]


def write_score_csv(path: str | Path, sheet_set: ScoreSheetSet) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCORE_CSV_HEADER)
        for essay_id in sorted(sheet_set.sheets):
            sheet = sheet_set.sheets[essay_id]
            for aspect in ASPECTS:
                if aspect in sheet.scores:
                    writer.writerow(
                        [essay_id, aspect.value, sheet.scores[aspect], sheet_set.model_id]
                    )


def read_score_csv(path: str | Path) -> dict[str, ScoreSheetSet]:
    """Read a score file; rows may mix sources, one sheet set per source."""
    sets: dict[str, ScoreSheetSet] = {}
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SCORE_CSV_HEADER:
            raise ValidationError(f"{path}: unexpected header {header}")
        aspect_by_key = {a.value: a for a in ASPECTS}
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ValidationError(f"{path}:{line_no}: expected 4 columns")
            essay_id, aspect_key, score_raw, source = row
            if aspect_key not in aspect_by_key:
                raise ValidationError(f"{path}:{line_no}: unknown aspect {aspect_key!r}")
            try:
                score = int(score_raw)
            except ValueError as exc:
                raise ValidationError(f"{path}:{line_no}: bad score {score_raw!r}") from exc
            sets.setdefault(source, ScoreSheetSet(source)).add_score(
                essay_id, aspect_by_key[aspect_key], score
            )
    return sets


# --- bias regression ---------------------------------------------------


@dataclass
class BiasEntry:
    coef: Fraction
    se: float
    t_stat: float
    p_value: float
    stars: str
    n_rows: int


@dataclass
class BiasReport:
    intercept: Fraction  # the human mean total
    residual_df: int
    models: dict[str, BiasEntry]


def significance_stars(p: float) -> str:
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


def bias_regression(
    human_totals: Sequence[tuple[int, int]],
    model_totals: Mapping[str, Sequence[Rational]],
) -> BiasReport:
    """Regression of per-essay totals on grader identity.

    Every essay contributes one row per human rater; every model
    contributes one row per essay it fully scored.  With an intercept
    plus one indicator per model, the least-squares fit reduces to group
    means: the intercept is the human mean and each model coefficient is
    that model's departure from it.  Standard errors come from the
    pooled residual variance of that same fit.
    """
    if not human_totals:
        raise ValidationError("bias regression needs human totals")
    human_rows = [Fraction(t) for pair in human_totals for t in pair]
    n_h = len(human_rows)
    human_mean = sum(human_rows, Fraction(0)) / n_h

    groups: dict[str, list[Fraction]] = {
        name: [Fraction(t) for t in totals] for name, totals in model_totals.items()
    }
    for name, totals in groups.items():
        if not totals:
            raise ValidationError(f"model {name} has no complete sheets")

    n_rows = n_h + sum(len(t) for t in groups.values())
    n_params = 1 + len(groups)
    df = n_rows - n_params
    if df <= 0:
        raise ValidationError("not enough rows for a residual variance estimate")

    rss = sum((v - human_mean) ** 2 for v in human_rows)
    coefs: dict[str, Fraction] = {}
    for name, totals in groups.items():
        group_mean = sum(totals, Fraction(0)) / len(totals)
        coefs[name] = group_mean - human_mean
        rss += sum((v - group_mean) ** 2 for v in totals)
    s2 = Fraction(rss) / df

    models: dict[str, BiasEntry] = {}
    for name, totals in groups.items():
        var = s2 * (Fraction(1, n_h) + Fraction(1, len(totals)))
        se = math.sqrt(float(var))
        coef = coefs[name]
        if se == 0.0:
            t_stat = math.inf if coef > 0 else (-math.inf if coef < 0 else 0.0)
            p = 0.0 if coef != 0 else 1.0
        else:
            t_stat = float(coef) / se
            p = 2.0 * float(stdtr(df, -abs(t_stat)))
        models[name] = BiasEntry(
            coef=coef,
            se=se,
            t_stat=t_stat,
            p_value=p,
            stars=significance_stars(p),
            n_rows=len(totals),
        )
    return BiasReport(intercept=human_mean, residual_df=df, models=models)


# --- corpus-level evaluation -------------------------------------------


@dataclass
class ModelEval:
    model_id: str
    n_complete: int
    n_incomplete: int
    bias: BiasEntry | None
    mae_total: Fraction | None
    accuracy_pct: Fraction | None
    in_range_pct: Fraction | None
    aspect_mae: dict[RubricAspect, Fraction] = field(default_factory=dict)
    aspect_mean: dict[RubricAspect, Fraction] = field(default_factory=dict)


@dataclass
class EvalReport:
    n_essays: int
    human_mean_total: Fraction
    human_mad_total: Fraction
    human_aspect_mad: dict[RubricAspect, Fraction]
    human_aspect_mean: dict[RubricAspect, Fraction]
    bias: BiasReport | None
    models: list[ModelEval] = field(default_factory=list)


def evaluate(records: Sequence[EssayRecord], sheet_sets: Mapping[str, ScoreSheetSet]) -> EvalReport:
    """Compare every model's sheets against the two raters.

    Total-based metrics (bias, total MAE, in-range share) use only
    essays the model scored completely; per-aspect metrics use whatever
    aspect scores exist.
    """
    if not records:
        raise ValidationError("no essays to evaluate")
    by_id = {r.essay_id: r for r in records}
    cons = {r.essay_id: consensus(r) for r in records}

    human_totals = [(r.scores_g1.total, r.scores_g2.total) for r in records]
    human_mean_total = sum(
        (Fraction(a + b, 2) for a, b in human_totals), Fraction(0)
    ) / len(records)
    human_mad_total = human_mad(human_totals)
    human_aspect_mad = {
        a: human_mad([(r.scores_g1[a], r.scores_g2[a]) for r in records]) for a in ASPECTS
    }
    human_aspect_mean = {
        a: sum((cons[r.essay_id][a] for r in records), Fraction(0)) / len(records)
        for a in ASPECTS
    }

    model_totals: dict[str, list[int]] = {}
    evals: list[ModelEval] = []
    for model_id in sorted(sheet_sets):
        sheet_set = sheet_sets[model_id]
        known = {eid: s for eid, s in sheet_set.sheets.items() if eid in by_id}
        complete = {eid: s for eid, s in known.items() if s.is_complete}
        n_incomplete = len(known) - len(complete)

        aspect_mae: dict[RubricAspect, Fraction] = {}
        aspect_mean: dict[RubricAspect, Fraction] = {}
        for aspect in ASPECTS:
            scored = [
                (s.scores[aspect], cons[eid][aspect])
                for eid, s in known.items()
                if aspect in s.scores
            ]
            if scored:
                aspect_mae[aspect] = mae(scored)
                aspect_mean[aspect] = sum(
                    (Fraction(v) for v, _ in scored), Fraction(0)
                ) / len(scored)

        if complete:
            ids = sorted(complete)
            totals = [complete[eid].total for eid in ids]
            model_totals[model_id] = totals
            mae_total = mae(
                [(complete[eid].total, cons[eid].total) for eid in ids]
            )
            accuracy = normalized_accuracy(mae_total, MAX_SCORE * len(ASPECTS))
            in_range_pct = in_range_total_pct(
                (
                    (complete[eid].total, *lenient_harsh_totals(by_id[eid]))
                    for eid in ids
                )
            )
        else:
            mae_total = accuracy = in_range_pct = None

        evals.append(
            ModelEval(
                model_id=model_id,
                n_complete=len(complete),
                n_incomplete=n_incomplete,
                bias=None,
                mae_total=mae_total,
                accuracy_pct=accuracy,
                in_range_pct=in_range_pct,
                aspect_mae=aspect_mae,
                aspect_mean=aspect_mean,
            )
        )

    bias_report = bias_regression(human_totals, model_totals) if model_totals else None
    if bias_report is not None:
        for ev in evals:
            ev.bias = bias_report.models.get(ev.model_id)

    return EvalReport(
        n_essays=len(records),
        human_mean_total=human_mean_total,
        human_mad_total=human_mad_total,
        human_aspect_mad=human_aspect_mad,
        human_aspect_mean=human_aspect_mean,
        bias=bias_report,
        models=evals,
    )
