"""Reference results from the original full-scale grading study.

None of these numbers are recomputable here: the exam corpora are not
redistributable and the grading runs used live commercial models.  They
are shipped as constants so reports can print locally computed results
next to the published baselines, and so downstream tooling has one
canonical place to read them from.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import RubricAspect


@dataclass(frozen=True)
class LlmGradingBaseline:
    """One model row of the total-score comparison (0..27 scale)."""

    model: str
    bias: float
    stars: str
    mae_total: float
    in_range_pct: int


@dataclass(frozen=True)
class CohortBaseline:
    grade_level: int
    n_essays: int
    human_mean_total: float
    rows: tuple[LlmGradingBaseline, ...]


LLM_GRADING_BASELINES: dict[int, CohortBaseline] = {
    9: CohortBaseline(
        grade_level=9,
        n_essays=781,
        human_mean_total=16.08,
        rows=(
            LlmGradingBaseline("Gemini 1.5 Pro", -3.66, "***", 4.24, 46),
            LlmGradingBaseline("Gemini 2 Flash", -1.11, "***", 2.95, 61),
            LlmGradingBaseline("GPT-4.1", +1.71, "***", 2.94, 64),
            LlmGradingBaseline("GPT-4o", +0.46, "*", 2.66, 67),
            LlmGradingBaseline("o4-mini-low", 0.00, "", 2.68, 68),
        ),
    ),
    12: CohortBaseline(
        grade_level=12,
        n_essays=764,
        human_mean_total=13.92,
        rows=(
            LlmGradingBaseline("Gemini 2 Flash", +1.73, "***", 3.35, 55),
            LlmGradingBaseline("GPT-4.1", +4.68, "***", 4.97, 36),
            LlmGradingBaseline("GPT-4.1_harsh", +4.27, "***", 4.69, 39),
        ),
    ),
}


@dataclass(frozen=True)
class RegressionBaseline:
    """Best supervised pipeline per language aspect.

    `pool_size` is how many features survived multicollinearity pruning
    for that aspect; `n_features` is the univariate-selection cap of the
    winning pipeline.  `regressor` names the winning family in the
    original runs; SVR rows have no runnable counterpart here (see
    OMITTED_REGRESSORS_NOTE).
    """

    aspect: RubricAspect
    regressor: str
    n_features: int
    in_range_pct: int
    pool_size: int


REGRESSION_BASELINES: dict[int, tuple[RegressionBaseline, ...]] = {
    9: (
        RegressionBaseline(RubricAspect.VOCABULARY, "LR/RR", 10, 70, 39),
        RegressionBaseline(RubricAspect.SYNTAX, "LR/RR", 9, 66, 50),
        RegressionBaseline(RubricAspect.PUNCTUATION, "SVR", 3, 64, 3),
        RegressionBaseline(RubricAspect.ORTHOGRAPHY, "SVR", 6, 55, 7),
        RegressionBaseline(RubricAspect.STRUCTURING, "SVR", 8, 56, 8),
    ),
    12: (
        RegressionBaseline(RubricAspect.VOCABULARY, "RFR", 14, 68, 37),
        RegressionBaseline(RubricAspect.SYNTAX, "LR/RR", 21, 64, 47),
        RegressionBaseline(RubricAspect.PUNCTUATION, "SVR", 3, 62, 4),
        RegressionBaseline(RubricAspect.ORTHOGRAPHY, "SVR", 4, 51, 7),
        RegressionBaseline(RubricAspect.STRUCTURING, "RFR", 8, 61, 8),
    ),
}

OMITTED_REGRESSORS_NOTE = (
    "This harness implements OLS, Ridge, Decision Tree, and Random Forest "
    "regressors. SVR, Lasso, and Elastic Net were part of the original "
    "experiment grid but are not implemented here; reference rows naming "
    "SVR have no directly runnable counterpart."
)


@dataclass(frozen=True)
class InjectionBaseline:
    grade_level: int
    grader_model: str
    sample_size: int
    mean_delta: float
    min_delta: int
    max_delta: int


INJECTION_BASELINE = InjectionBaseline(
    grade_level=9,
    grader_model="GPT-4.1",
    sample_size=100,
    mean_delta=6.43,
    min_delta=2,
    max_delta=16,
)


@dataclass(frozen=True)
class GenerationBaseline:
    writer_model: str
    grader_model: str
    temperature: float
    n_essays: int
    n_max_total: int
    mean_total: float
    #: student-essay comparison points from the same grading setup
    student_n: int
    student_mean_total: float
    student_max_count_g1: int
    student_max_count_g2: int
    student_mean_total_model: float


GENERATION_BASELINE = GenerationBaseline(
    writer_model="GPT-4.1",
    grader_model="GPT-4.1_harsh",
    temperature=1.0,
    n_essays=20,
    n_max_total=19,
    mean_total=26.95,
    student_n=764,
    student_mean_total=13.95,
    student_max_count_g1=7,
    student_max_count_g2=2,
    student_mean_total_model=18.2,
)


@dataclass(frozen=True)
class GradingCostBaseline:
    """Token accounting of the full 9th-grade grading run."""

    corpus_tokens: int
    total_tokens: int
    approx_cost_usd: float
    model: str


GRADING_COST_BASELINE = GradingCostBaseline(
    corpus_tokens=400_433,
    total_tokens=9_098_937,
    approx_cost_usd=20.0,
    model="GPT-4.1",
)


def reference_lines() -> list[str]:
    """The reference tables as plain text, for inclusion in reports."""
    lines: list[str] = []
    lines.append("Reference results (full-scale runs; not recomputable here)")
    lines.append("=" * 58)
    for level in (9, 12):
        cohort = LLM_GRADING_BASELINES[level]
        lines.append("")
        lines.append(
            f"Zero-shot grading, grade {level} ({cohort.n_essays} essays, "
            f"human mean total {cohort.human_mean_total:.2f}):"
        )
        lines.append(f"  {'model':<16} {'bias':>6} {'p':<4} {'MAE':>5} {'in range':>9}")
        for row in cohort.rows:
            lines.append(
                f"  {row.model:<16} {row.bias:>+6.2f} {row.stars:<4} "
                f"{row.mae_total:>5.2f} {row.in_range_pct:>8d}%"
            )
    for level in (9, 12):
        lines.append("")
        lines.append(f"Best supervised pipelines, grade {level}:")
        lines.append(
            f"  {'aspect':<14} {'regressor':<10} {'features':>8} "
            f"{'in range':>9} {'pool':>5}"
        )
        for row in REGRESSION_BASELINES[level]:
            lines.append(
                f"  {row.aspect.value:<14} {row.regressor:<10} {row.n_features:>8d} "
                f"{row.in_range_pct:>8d}% {row.pool_size:>5d}"
            )
    lines.append("")
    lines.append(f"Note: {OMITTED_REGRESSORS_NOTE}")
    inj = INJECTION_BASELINE
    lines.append("")
    lines.append(
        f"Prompt injection (grade {inj.grade_level}, {inj.grader_model}, "
        f"{inj.sample_size}-essay sample): mean delta +{inj.mean_delta:.2f} "
        f"points, min +{inj.min_delta}, max +{inj.max_delta}."
    )
    gen = GENERATION_BASELINE
    lines.append(
        f"Generated essays ({gen.writer_model} at temperature {gen.temperature:g}, "
        f"graded by {gen.grader_model}): {gen.n_max_total}/{gen.n_essays} scored "
        f"the maximal 27, mean total {gen.mean_total:.2f}; student essays in the "
        f"same setup averaged {gen.student_mean_total_model:.1f} "
        f"(human mean {gen.student_mean_total:.2f}, n={gen.student_n})."
    )
    cost = GRADING_COST_BASELINE
    lines.append(
        f"Token spend of the grade-9 grading run: {cost.total_tokens:,} tokens "
        f"({cost.corpus_tokens:,} of corpus text), about ${cost.approx_cost_usd:.0f} "
        f"on {cost.model}."
    )
    return lines
