"""Writers for every structured artifact the pipeline emits.

All files are plain CSV, JSON, or fixed-layout text.  Formatting is
deterministic: the same inputs always produce the same bytes, which is
what lets golden-file tests pin the evaluation output exactly.
"""

from __future__ import annotations

import csv
import json
import shutil
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .corpus import ASPECTS
from .errors import ValidationError
from .experiments import DeltaReport
from .features.assemble import FeatureRow
from .llmgrade.batch import RunLedger
from .metrics import EvalReport
from .reference import reference_lines
from .regress import PipelineResult


def _f(x: Fraction | float | None, digits: int = 4) -> str:
    if x is None:
        return "-"
    return f"{float(x):.{digits}f}"


# --- feature vectors ----------------------------------------------------


def write_features_csv(
    path: str | Path, names: Sequence[str], rows: Mapping[str, FeatureRow]
) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["essay_id", *names])
        for essay_id in sorted(rows):
            writer.writerow(
                [essay_id, *(repr(v) for v in rows[essay_id].vector(tuple(names)))]
            )


def read_features_csv(path: str | Path) -> tuple[list[str], list[str], np.ndarray]:
    """Returns (essay_ids, feature_names, matrix)."""
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "essay_id":
            raise ValidationError(f"{path}: expected an essay_id + features header")
        names = header[1:]
        ids: list[str] = []
        data: list[list[float]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValidationError(
                    f"{path}:{line_no}: expected {len(header)} columns, got {len(row)}"
                )
            ids.append(row[0])
            try:
                data.append([float(v) for v in row[1:]])
            except ValueError as exc:
                raise ValidationError(f"{path}:{line_no}: non-numeric value") from exc
    if not ids:
        raise ValidationError(f"{path}: no feature rows")
    return ids, names, np.array(data, dtype=float)


# --- evaluation reports -------------------------------------------------


def eval_report_to_dict(report: EvalReport) -> dict:
    out: dict = {
        "n_essays": report.n_essays,
        "human_mean_total": float(report.human_mean_total),
        "human_mad_total": float(report.human_mad_total),
        "human_aspect_mad": {
            a.value: float(report.human_aspect_mad[a]) for a in ASPECTS
        },
        "human_aspect_mean": {
            a.value: float(report.human_aspect_mean[a]) for a in ASPECTS
        },
        "models": [],
    }
    for ev in report.models:
        entry: dict = {
            "model_id": ev.model_id,
            "n_complete": ev.n_complete,
            "n_incomplete": ev.n_incomplete,
            "mae_total": None if ev.mae_total is None else float(ev.mae_total),
            "accuracy_pct": None if ev.accuracy_pct is None else float(ev.accuracy_pct),
            "in_range_pct": None if ev.in_range_pct is None else float(ev.in_range_pct),
            "aspect_mae": {a.value: float(v) for a, v in ev.aspect_mae.items()},
            "aspect_mean": {a.value: float(v) for a, v in ev.aspect_mean.items()},
        }
        if ev.bias is not None:
            entry["bias"] = {
                "coef": float(ev.bias.coef),
                "se": ev.bias.se,
                "t_stat": ev.bias.t_stat,
                "p_value": ev.bias.p_value,
                "stars": ev.bias.stars,
            }
        out["models"].append(entry)
    return out


def write_eval_json(path: str | Path, report: EvalReport) -> None:
    Path(path).write_text(
        json.dumps(eval_report_to_dict(report), indent=1, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def write_eval_txt(path: str | Path, report: EvalReport) -> None:
    lines: list[str] = []
    lines.append(f"Grading evaluation over {report.n_essays} essays")
    lines.append(
        f"Human mean total {_f(report.human_mean_total, 2)}, "
        f"human MAD on totals {_f(report.human_mad_total, 2)}"
    )
    lines.append("")
    lines.append("Totals (0..27): bias vs human intercept, MAE, in-range share")
    lines.append(
        f"  {'model':<20} {'bias':>7} {'p':<4} {'MAE':>6} {'acc%':>6} "
        f"{'in range':>9} {'complete':>9} {'partial':>8}"
    )
    for ev in report.models:
        bias = f"{float(ev.bias.coef):+.2f}" if ev.bias is not None else "-"
        stars = ev.bias.stars if ev.bias is not None else ""
        in_range = f"{float(ev.in_range_pct):.0f}%" if ev.in_range_pct is not None else "-"
        acc = _f(ev.accuracy_pct, 1) if ev.accuracy_pct is not None else "-"
        lines.append(
            f"  {ev.model_id:<20} {bias:>7} {stars:<4} {_f(ev.mae_total, 2):>6} "
            f"{acc:>6} {in_range:>9} {ev.n_complete:>9d} {ev.n_incomplete:>8d}"
        )
    lines.append("")
    lines.append("Per-aspect MAE (0..3) vs consensus, with human MAD:")
    header = f"  {'aspect':<20} {'human MAD':>9}"
    for ev in report.models:
        header += f" {ev.model_id[:14]:>14}"
    lines.append(header)
    for aspect in ASPECTS:
        row = f"  {aspect.value:<20} {_f(report.human_aspect_mad[aspect], 3):>9}"
        for ev in report.models:
            v = ev.aspect_mae.get(aspect)
            row += f" {_f(v, 3) if v is not None else '-':>14}"
        lines.append(row)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_aspect_csv(path: str | Path, report: EvalReport) -> None:
    """Plot-ready long-format rows: one per (aspect, model)."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["aspect", "model", "mae", "human_mad"])
        for aspect in ASPECTS:
            mad = repr(float(report.human_aspect_mad[aspect]))
            for ev in report.models:
                if aspect in ev.aspect_mae:
                    writer.writerow(
                        [aspect.value, ev.model_id, repr(float(ev.aspect_mae[aspect])), mad]
                    )


# --- cross-validation reports -------------------------------------------


def cv_report_to_dict(
    aspect: str,
    regressor_desc: str,
    result: PipelineResult,
    feature_names: Sequence[str],
    n_features: int | None,
    in_range_pct: float | None,
) -> dict:
    return {
        "aspect": aspect,
        "regressor": regressor_desc,
        "k_folds": result.plan.k,
        "seed": result.plan.seed,
        "n_essays": result.plan.n,
        "n_features_total": len(feature_names),
        "pruned_pool": [feature_names[j] for j in result.kept_indices],
        "selection_cap": n_features,
        "selected_per_fold": [
            [feature_names[j] for j in fold] for fold in result.selected_per_fold
        ],
        "fold_maes": result.fold_maes,
        "mean_mae": result.mean_mae,
        "sd_mae": result.sd_mae,
        "in_range_pct": in_range_pct,
    }


def write_cv_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=1, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def write_cv_txt(path: str | Path, payload: dict) -> None:
    lines = [
        f"Cross-validated scoring: aspect {payload['aspect']}, "
        f"regressor {payload['regressor']}",
        f"{payload['k_folds']} folds, seed {payload['seed']}, "
        f"{payload['n_essays']} essays, "
        f"{payload['n_features_total']} features of which "
        f"{len(payload['pruned_pool'])} survive pruning",
        f"selection cap per fold: {payload['selection_cap'] or 'none (all survivors)'}",
        "fold MAEs: " + " ".join(f"{m:.4f}" for m in payload["fold_maes"]),
        f"mean MAE {payload['mean_mae']:.4f}, SD {payload['sd_mae']:.4f}",
    ]
    if payload["in_range_pct"] is not None:
        lines.append(
            f"predictions rounded to 0.5 inside the raters' interval: "
            f"{payload['in_range_pct']:.1f}%"
        )
    lines.append("selected features per fold:")
    for fold, names in enumerate(payload["selected_per_fold"]):
        lines.append(f"  fold {fold}: {', '.join(names)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_correlation_csv(
    path: str | Path, correlations: Mapping[str, tuple[float, float]]
) -> None:
    """Per-feature correlation with the target, averaged over the fold
    training sets; the companion to the selected-feature lists."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "mean_corr", "sd_corr"])
        for name, (mean, sd) in correlations.items():
            writer.writerow([name, repr(mean), repr(sd)])


# --- experiment artifacts -----------------------------------------------


def write_delta_csv(path: str | Path, report: DeltaReport) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["essay_id", "baseline_total", "injected_total", "delta"])
        for row in report.rows:
            writer.writerow(
                [row.essay_id, row.baseline_total, row.injected_total, row.delta]
            )


def delta_summary_to_dict(report: DeltaReport, payload: str, position: str) -> dict:
    return {
        "payload": payload,
        "position": position,
        "n_essays": len(report.rows),
        "mean_delta": report.mean_delta,
        "min_delta": report.min_delta,
        "max_delta": report.max_delta,
        "excluded": report.excluded,
    }


def write_ledger_json(path: str | Path, ledger: RunLedger) -> None:
    Path(path).write_text(
        json.dumps(ledger.to_dict(), indent=1) + "\n", encoding="utf-8"
    )


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=1, ensure_ascii=False) + "\n", encoding="utf-8"
    )


# --- merged summary -----------------------------------------------------

#: JSON artifacts the merge step knows how to summarise, by file name.
_KNOWN_JSON = ("eval_report.json", "delta_summary.json", "ledger.json", "provenance.json")


def _summarise_json(name: str, doc: dict, lines: list[str]) -> None:
    if name == "eval_report.json":
        lines.append(
            f"  evaluation of {doc.get('n_essays')} essays, "
            f"human mean total {doc.get('human_mean_total'):.2f}"
        )
        for model in doc.get("models", []):
            bias = model.get("bias") or {}
            coef = bias.get("coef")
            bias_txt = f"{coef:+.2f}{bias.get('stars', '')}" if coef is not None else "-"
            mae = model.get("mae_total")
            in_range = model.get("in_range_pct")
            lines.append(
                f"    {model.get('model_id')}: bias {bias_txt}, "
                f"total MAE {mae if mae is None else round(mae, 2)}, "
                f"in range {in_range if in_range is None else round(in_range)}%"
            )
    elif name == "delta_summary.json":
        lines.append(
            f"  injection over {doc.get('n_essays')} essays: "
            f"mean delta {doc.get('mean_delta'):+.2f}, "
            f"min {doc.get('min_delta'):+d}, max {doc.get('max_delta'):+d}"
        )
    elif name == "ledger.json":
        lines.append(
            f"  ledger: {doc.get('requests')} requests, {doc.get('cache_hits')} cache "
            f"hits, {doc.get('failures')} failures, "
            f"{doc.get('input_tokens')}+{doc.get('output_tokens')} tokens, "
            f"est. ${doc.get('estimated_cost')}"
        )
    elif name == "provenance.json":
        lines.append(
            f"  generation: {doc.get('n_generated')}/{doc.get('n_requested')} essays "
            f"from {doc.get('model_id')} at temperature {doc.get('temperature')}, "
            f"{len(doc.get('duplicates', []))} duplicates"
        )


def merge_reports(in_dir: str | Path, out_dir: str | Path) -> list[Path]:
    """Collect artifacts under `in_dir` into one summary plus copies of
    every plot-data CSV.  Returns the paths written."""
    in_dir = Path(in_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    lines: list[str] = ["Combined run summary", "=" * 20]
    found_any = False
    for path in sorted(in_dir.rglob("*.json")):
        if path.name not in _KNOWN_JSON and not path.name.startswith("cv_"):
            continue
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            continue
        if not isinstance(doc, dict):
            continue
        found_any = True
        lines.append("")
        lines.append(f"{path.relative_to(in_dir)}:")
        if path.name.startswith("cv_"):
            lines.append(
                f"  CV {doc.get('aspect')} / {doc.get('regressor')}: mean MAE "
                f"{doc.get('mean_mae'):.4f} (SD {doc.get('sd_mae'):.4f}), "
                f"in range {doc.get('in_range_pct', 0.0):.0f}%"
            )
        else:
            _summarise_json(path.name, doc, lines)
    if not found_any:
        lines.append("")
        lines.append("(no recognised artifacts found)")

    for path in sorted(in_dir.rglob("*.csv")):
        target = out_dir / path.name
        if target.resolve() != path.resolve():
            shutil.copyfile(path, target)
        written.append(target)

    lines.append("")
    lines.extend(reference_lines())
    summary = out_dir / "summary.txt"
    summary.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.insert(0, summary)
    return written
