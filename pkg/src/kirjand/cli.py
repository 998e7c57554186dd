"""Command-line entry point: one subcommand per pipeline stage.

Every subcommand writes only inside its --out directory and finishes by
dropping a run manifest there.  Exit codes: 0 success, 1 validation or
configuration failure, 2 transport or budget failure, 3 internal
invariant violation.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import click
import numpy as np

from .corpus import ASPECTS, LANGUAGE_ASPECTS, EssayRecord, consensus, load_corpus
from .editlab import EditSet, build_edit_set, read_spell_tsv
from .errors import KirjandError, ValidationError
from .experiments import (
    DEFAULT_PAYLOAD,
    InjectionConfig,
    generate_essays,
    run_injection,
)
from .features.assemble import assemble_features
from .features.lexical import load_abstractness, load_frequency_list
from .features.registry import load_registry
from .llmgrade.batch import grade_corpus
from .llmgrade.providers import load_endpoint
from .llmgrade.rubric import load_rubric
from .manifest import RunManifest
from .metrics import evaluate, read_score_csv, write_score_csv
from .regress import (
    Dataset,
    ForestConfig,
    OLSConfig,
    RidgeConfig,
    TreeConfig,
    cross_validate,
    in_range_rate,
    make_fold_plan,
    round_half,
)
from .report import (
    cv_report_to_dict,
    delta_summary_to_dict,
    merge_reports,
    read_features_csv,
    write_correlation_csv,
    write_cv_json,
    write_cv_txt,
    write_delta_csv,
    write_eval_json,
    write_eval_txt,
    write_aspect_csv,
    write_features_csv,
    write_json,
    write_ledger_json,
)
from .textproc import parse_conllu, segment


@click.group()
def cli() -> None:
    """Rubric-driven essay scoring and evaluation harness."""


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_records(corpus_path: str, grade_level: int | None = None) -> list[EssayRecord]:
    result = load_corpus(corpus_path, grade_level=grade_level)
    for skip in result.skipped:
        click.echo(
            f"skipped line {skip.line_no}"
            + (f" ({skip.essay_id})" if skip.essay_id else "")
            + f": {skip.reason}",
            err=True,
        )
    if not result.records:
        raise ValidationError(f"{corpus_path}: no usable records")
    return result.records


# --- extract ------------------------------------------------------------


@cli.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--annotations", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--freq", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--abstr", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--registry", "registry_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False))
def extract(corpus, annotations, freq, abstr, registry_path, out) -> None:
    """Compute the full feature vector for every essay.

    The annotations directory may hold, per essay id: `<id>.conllu`
    (morphological annotation; plain segmentation is the fallback),
    `<id>.corr.txt` (corrected text for edit extraction), and
    `<id>.spell.tsv` (spell-checker corrections).
    """
    out_dir = _out_dir(out)
    manifest = RunManifest(command="extract")
    manifest.start()
    for label, path in (("corpus", corpus), ("annotations", annotations),
                        ("freq", freq), ("abstr", abstr)):
        manifest.add_input(label, path)

    registry = load_registry(registry_path)
    if registry_path:
        manifest.add_config(registry_path)
    records = _load_records(corpus)
    freq_ranks = load_frequency_list(freq)
    abstractness = load_abstractness(abstr)
    ann_dir = Path(annotations)

    rows = {}
    skipped: list[tuple[str, str]] = []
    for record in records:
        conllu = ann_dir / f"{record.essay_id}.conllu"
        corr = ann_dir / f"{record.essay_id}.corr.txt"
        spell = ann_dir / f"{record.essay_id}.spell.tsv"
        try:
            annotated = parse_conllu(conllu) if conllu.exists() else segment(record.text)
            orig_seg = segment(record.text)
            corrections = read_spell_tsv(spell) if spell.exists() else []
            if corr.exists():
                corr_seg = segment(corr.read_text(encoding="utf-8"))
                edit_set = build_edit_set(orig_seg, corr_seg, corrections)
            else:
                # No corrected text: zero grammar edits, spelling only.
                edit_set = build_edit_set(orig_seg, orig_seg, corrections)
            rows[record.essay_id] = assemble_features(
                annotated, edit_set, freq_ranks, abstractness, registry
            )
        except KirjandError as exc:
            skipped.append((record.essay_id, str(exc)))
    if not rows:
        raise ValidationError("no essay produced a feature vector")

    features_path = out_dir / "features.csv"
    write_features_csv(features_path, registry.names, rows)
    manifest.add_output(features_path)
    if skipped:
        skip_path = out_dir / "extract_skipped.csv"
        with skip_path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["essay_id", "reason"])
            writer.writerows(skipped)
        manifest.add_output(skip_path)
        click.echo(f"{len(skipped)} essays skipped; see {skip_path}", err=True)
    flagged = {eid: row.flags for eid, row in rows.items() if row.flags}
    if flagged:
        flags_path = out_dir / "extract_flags.json"
        write_json(flags_path, flagged)
        manifest.add_output(flags_path)
    manifest.parameters["n_essays"] = len(rows)
    manifest.write(out_dir)
    click.echo(f"wrote {features_path} ({len(rows)} essays x {len(registry.names)} features)")


# --- cv -----------------------------------------------------------------

_REGRESSORS = ("ols", "ridge", "tree", "forest")


def _regressor_config(name, lam, n_trees, min_leaf, max_depth, mtry):
    if name == "ols":
        return OLSConfig(), "ols"
    if name == "ridge":
        return RidgeConfig(lam=lam), f"ridge(lam={lam:g})"
    if name == "tree":
        return (
            TreeConfig(min_leaf=min_leaf, max_depth=max_depth),
            f"tree(min_leaf={min_leaf})",
        )
    return (
        ForestConfig(n_trees=n_trees, min_leaf=min_leaf, max_depth=max_depth, mtry=mtry),
        f"forest(trees={n_trees},min_leaf={min_leaf})",
    )


@cli.command()
@click.option("--features", "features_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--aspect", required=True,
              type=click.Choice([a.value for a in LANGUAGE_ASPECTS]))
@click.option("--regressor", required=True, type=click.Choice(_REGRESSORS))
@click.option("--k", default=10, show_default=True, help="Number of folds.")
@click.option("--seed", default=0, show_default=True)
@click.option("--select", "select_k", type=int,
              help="Cap univariate feature selection at this many features per fold.")
@click.option("--lam", default=1.0, show_default=True, help="Ridge penalty.")
@click.option("--trees", "n_trees", default=100, show_default=True)
@click.option("--min-leaf", default=5, show_default=True)
@click.option("--max-depth", type=int, default=None)
@click.option("--mtry", type=int, default=None)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def cv(features_path, corpus, aspect, regressor, k, seed, select_k, lam,
       n_trees, min_leaf, max_depth, mtry, out) -> None:
    """Cross-validated supervised scoring of one language aspect."""
    out_dir = _out_dir(out)
    manifest = RunManifest(command="cv")
    manifest.start()
    manifest.add_input("features", features_path)
    manifest.add_input("corpus", corpus)
    manifest.seeds["fold_plan"] = seed

    ids, names, X = read_features_csv(features_path)
    records = {r.essay_id: r for r in _load_records(corpus)}
    missing = [eid for eid in ids if eid not in records]
    if missing:
        raise ValidationError(
            f"feature rows without corpus records: {', '.join(missing[:5])}"
            + (" ..." if len(missing) > 5 else "")
        )
    aspect_enum = next(a for a in LANGUAGE_ASPECTS if a.value == aspect)
    y = np.array(
        [float(consensus(records[eid])[aspect_enum]) for eid in ids], dtype=float
    )
    dataset = Dataset(X=X, y=y, feature_names=tuple(names), essay_ids=tuple(ids))
    plan = make_fold_plan(len(ids), k=k, seed=seed)
    config, desc = _regressor_config(regressor, lam, n_trees, min_leaf, max_depth, mtry)
    result = cross_validate(dataset, plan, config, n_features=select_k)

    g1 = np.array([records[eid].scores_g1[aspect_enum] for eid in ids], dtype=float)
    g2 = np.array([records[eid].scores_g2[aspect_enum] for eid in ids], dtype=float)
    in_range_pct = 100.0 * in_range_rate(round_half(result.predictions), g1, g2)

    payload = cv_report_to_dict(aspect, desc, result, names, select_k, in_range_pct)
    stem = f"cv_{aspect}_{regressor}"
    json_path = out_dir / f"{stem}.json"
    txt_path = out_dir / f"{stem}.txt"
    corr_path = out_dir / f"{stem}_correlations.csv"
    write_cv_json(json_path, payload)
    write_cv_txt(txt_path, payload)
    write_correlation_csv(corr_path, result.feature_correlations)
    for path in (json_path, txt_path, corr_path):
        manifest.add_output(path)
    manifest.parameters.update(
        {"aspect": aspect, "regressor": desc, "k": k, "select": select_k}
    )
    manifest.write(out_dir)
    click.echo(
        f"{aspect} / {desc}: mean MAE {result.mean_mae:.4f} "
        f"(SD {result.sd_mae:.4f}), in range {in_range_pct:.1f}%"
    )


# --- grade --------------------------------------------------------------


@cli.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--rubric", "rubric_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--endpoint", "endpoint_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--budget", type=float, default=None,
              help="Abort if the estimated cost in USD would exceed this.")
@click.option("--grade-level", type=click.Choice(["9", "12"]), default=None)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def grade(corpus, rubric_path, endpoint_path, budget, grade_level, out) -> None:
    """Grade every essay on all nine aspects via the configured endpoint."""
    out_dir = _out_dir(out)
    manifest = RunManifest(command="grade")
    manifest.start()
    manifest.add_input("corpus", corpus)
    manifest.add_config(rubric_path)
    manifest.add_config(endpoint_path)

    records = _load_records(corpus, grade_level=int(grade_level) if grade_level else None)
    rubric = load_rubric(rubric_path)
    endpoint = load_endpoint(endpoint_path)
    cache_dir = out_dir / "cache"
    result = grade_corpus(records, rubric, endpoint, cache_dir, budget_usd=budget)

    scores_path = out_dir / "scores.csv"
    ledger_path = out_dir / "ledger.json"
    write_score_csv(scores_path, result.sheet_set)
    write_ledger_json(ledger_path, result.ledger)
    manifest.add_output(scores_path)
    manifest.add_output(ledger_path)
    if result.failures:
        failures_path = out_dir / "failures.csv"
        with failures_path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["essay_id", "aspect", "reason"])
            for f in result.failures:
                writer.writerow([f.essay_id, f.aspect.value, f.reason])
        manifest.add_output(failures_path)
        click.echo(f"{len(result.failures)} grading calls failed; see {failures_path}", err=True)
    manifest.parameters.update(
        {"n_essays": len(records), "n_calls": len(records) * len(ASPECTS), "budget": budget}
    )
    manifest.write(out_dir)
    ledger = result.ledger
    click.echo(
        f"graded {len(records)} essays: {ledger.requests} requests, "
        f"{ledger.cache_hits} cache hits, {ledger.failures} failures, "
        f"est. ${ledger.estimated_cost:.4f}"
    )


# --- eval ---------------------------------------------------------------


@cli.command("eval")
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--scores", "scores_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False))
def eval_cmd(corpus, scores_dir, out) -> None:
    """Compare score tables under --scores against the two human raters."""
    out_dir = _out_dir(out)
    manifest = RunManifest(command="eval")
    manifest.start()
    manifest.add_input("corpus", corpus)
    manifest.add_input("scores", scores_dir)

    records = _load_records(corpus)
    sheet_sets = {}
    score_files = sorted(Path(scores_dir).glob("*.csv"))
    if not score_files:
        raise ValidationError(f"{scores_dir}: no score tables (*.csv)")
    for path in score_files:
        for source, sheet_set in read_score_csv(path).items():
            if source in sheet_sets:
                raise ValidationError(
                    f"{path}: source {source!r} appears in more than one score table"
                )
            sheet_sets[source] = sheet_set
    report = evaluate(records, sheet_sets)

    json_path = out_dir / "eval_report.json"
    txt_path = out_dir / "eval_report.txt"
    csv_path = out_dir / "aspect_mae.csv"
    write_eval_json(json_path, report)
    write_eval_txt(txt_path, report)
    write_aspect_csv(csv_path, report)
    for path in (json_path, txt_path, csv_path):
        manifest.add_output(path)
    manifest.parameters["models"] = sorted(sheet_sets)
    manifest.write(out_dir)
    click.echo(f"evaluated {len(sheet_sets)} model(s) over {report.n_essays} essays")


# --- inject -------------------------------------------------------------


@cli.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--rubric", "rubric_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--endpoint", "endpoint_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--sample", type=int, default=None,
              help="Seeded random sample size; default grades the full corpus.")
@click.option("--seed", default=0, show_default=True)
@click.option("--payload", default=None, help="Override the injected sentence.")
@click.option("--budget", type=float, default=None)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def inject(corpus, rubric_path, endpoint_path, sample, seed, payload, budget, out) -> None:
    """Measure total-score movement when an override sentence is planted."""
    out_dir = _out_dir(out)
    manifest = RunManifest(command="inject")
    manifest.start()
    manifest.add_input("corpus", corpus)
    manifest.add_config(rubric_path)
    manifest.add_config(endpoint_path)
    manifest.seeds["sample"] = seed

    records = _load_records(corpus)
    rubric = load_rubric(rubric_path)
    endpoint = load_endpoint(endpoint_path)
    config = InjectionConfig(
        payload=payload if payload is not None else DEFAULT_PAYLOAD,
        sample_size=sample,
        seed=seed,
    )
    result = run_injection(
        records, rubric, endpoint, out_dir / "cache", config=config, budget_usd=budget
    )

    csv_path = out_dir / "delta_report.csv"
    summary_path = out_dir / "delta_summary.json"
    write_delta_csv(csv_path, result.report)
    write_json(
        summary_path, delta_summary_to_dict(result.report, config.payload, config.position)
    )
    write_ledger_json(out_dir / "ledger_baseline.json", result.baseline.ledger)
    write_ledger_json(out_dir / "ledger_injected.json", result.injected.ledger)
    for name in (csv_path, summary_path, out_dir / "ledger_baseline.json",
                 out_dir / "ledger_injected.json"):
        manifest.add_output(name)
    manifest.parameters.update({"sample": sample, "n_rows": len(result.report.rows)})
    manifest.write(out_dir)
    report = result.report
    click.echo(
        f"injection over {len(report.rows)} essays: mean delta "
        f"{report.mean_delta:+.2f}, min {report.min_delta:+d}, max {report.max_delta:+d}"
    )


# --- generate -----------------------------------------------------------


@cli.command()
@click.option("--task", "task_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--guidance", "guidance_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--sources", "sources_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Source texts, separated by lines containing only '---'.")
@click.option("--n", default=20, show_default=True)
@click.option("--temp", default=1.0, show_default=True)
@click.option("--endpoint", "endpoint_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--budget", type=float, default=None)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def generate(task_path, guidance_path, sources_path, n, temp, endpoint_path,
             budget, out) -> None:
    """Write essays from the task materials, with full provenance."""
    out_dir = _out_dir(out)
    manifest = RunManifest(command="generate")
    manifest.start()
    for label, path in (("task", task_path), ("guidance", guidance_path),
                        ("sources", sources_path)):
        manifest.add_input(label, path)
    manifest.add_config(endpoint_path)

    task = Path(task_path).read_text(encoding="utf-8")
    guidance = Path(guidance_path).read_text(encoding="utf-8")
    sources = [
        block.strip()
        for block in Path(sources_path).read_text(encoding="utf-8").split("\n---\n")
        if block.strip()
    ]
    endpoint = load_endpoint(endpoint_path)
    result = generate_essays(
        task, guidance, sources, n, endpoint, out_dir / "cache",
        temperature=temp, budget_usd=budget,
    )

    essays_dir = out_dir / "essays"
    essays_dir.mkdir(exist_ok=True)
    for essay in result.essays:
        path = essays_dir / f"{essay.essay_id}.txt"
        path.write_text(essay.text, encoding="utf-8")
        manifest.add_output(path)
    provenance_path = out_dir / "provenance.json"
    ledger_path = out_dir / "ledger.json"
    write_json(provenance_path, result.manifest)
    write_ledger_json(ledger_path, result.ledger)
    manifest.add_output(provenance_path)
    manifest.add_output(ledger_path)
    manifest.parameters.update({"n": n, "temperature": temp})
    manifest.write(out_dir)
    click.echo(
        f"generated {len(result.essays)}/{n} essays"
        + (f", {len(result.duplicates)} duplicates" if result.duplicates else "")
    )


# --- report -------------------------------------------------------------


@cli.command()
@click.option("--in", "in_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False))
def report(in_dir, out) -> None:
    """Merge artifacts from earlier stages into one summary, with the
    published reference numbers appended for comparison."""
    out_dir = _out_dir(out)
    manifest = RunManifest(command="report")
    manifest.start()
    manifest.add_input("in", in_dir)
    written = merge_reports(in_dir, out_dir)
    for path in written:
        manifest.add_output(path)
    manifest.write(out_dir)
    click.echo(f"wrote {written[0]}")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except (KirjandError, AssertionError) as exc:
        click.echo(f"error: {exc}", err=True)
        return getattr(exc, "exit_code", 3)
    return 0


if __name__ == "__main__":
    sys.exit(main())
