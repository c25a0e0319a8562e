"""`sentinel` command-line interface.

Exit codes: 0 success, 1 lex/parse failure (or empty corpus run),
2 degenerate labels during scoring, 3 unsupported language feature.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import corpus as corpus_mod
from . import metrics as metrics_mod
from . import report as report_mod
from .config import AnalysisConfig, load_config
from .errors import (
    DegenerateLabels,
    LexError,
    ParseError,
    SchemaError,
    SentinelError,
    UnsupportedFeature,
)
from .export import export_contract, import_predictions, write_jsonl
from .pipeline import VULNERABLE, run_pipeline

EXIT_PARSE = 1
EXIT_DEGENERATE = 2
EXIT_UNSUPPORTED = 3


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="TOML/JSON analysis config overrides.")
@click.pass_context
def main(ctx, config_path):
    """Two-phase bad-randomness analysis for Solidity contracts."""
    ctx.obj = load_config(config_path)


def _analyze_file(path: str, config: AnalysisConfig):
    source = Path(path).read_text(encoding="utf-8")
    return run_pipeline(source, file=path, config=config)


def _frontend_exit(exc: SentinelError) -> int:
    if isinstance(exc, UnsupportedFeature):
        return EXIT_UNSUPPORTED
    if isinstance(exc, (LexError, ParseError)):
        return EXIT_PARSE
    return EXIT_PARSE


@main.command()
@click.argument("files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "json_out", default=None,
              help="Write the JSON report to PATH, or '-' for stdout.")
@click.pass_obj
def analyze(config, files, json_out):
    """Analyze one or more .sol files and report per-contract verdicts."""
    reports = []
    try:
        for path in files:
            reports.extend(_analyze_file(path, config))
    except SentinelError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(_frontend_exit(exc))
    payload = {"schema_version": "1", "reports": [r.to_json() for r in reports]}
    if json_out == "-":
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    elif json_out:
        Path(json_out).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    else:
        for r in reports:
            click.echo(
                f"{r.contract_id}: {r.verdict} "
                f"({len(r.assessments)} paths, {r.timing_ms:.1f} ms)"
            )
            for a in r.assessments:
                rules = ",".join(m.rule_id for m in a.matched_rules) or "-"
                click.echo(
                    f"  path {a.path.id}: {a.risk} taint={a.path.sink_taint:.3f}"
                    f" nodes={list(a.path.node_seq)} rules={rules}"
                )


def _corpus_worker(args):
    path, contract_id, label, config = args
    try:
        reports = _analyze_file(path, config)
    except SentinelError as exc:
        return contract_id, None, None, str(exc)
    r = reports[0]
    record = export_contract(r.graph, r.assessments, contract_id, label=label)
    return contract_id, record, r, None


@main.command(name="corpus")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--manifest", "manifest_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Corpus manifest; defaults to DIRECTORY/manifest.json if present.")
@click.option("--out", "out_path", default="features.jsonl", show_default=True)
@click.option("--preds", "preds_path", default=None,
              help="Also write rule-based predictions (Vulnerable -> 1.0).")
@click.option("--jobs", default=1, show_default=True)
@click.pass_obj
def corpus_cmd(config, directory, manifest_path, out_path, preds_path, jobs):
    """Analyze every contract in a corpus directory into features.jsonl."""
    directory = Path(directory)
    manifest_path = manifest_path or (
        directory / "manifest.json" if (directory / "manifest.json").exists() else None
    )
    if manifest_path:
        manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
        tasks = [
            (str(directory / e["file"]), e["contract_id"], e["vulnerable"], config)
            for e in manifest["entries"]
        ]
    else:
        tasks = [
            (str(p), p.stem, None, config) for p in sorted(directory.glob("*.sol"))
        ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_corpus_worker, tasks))
    else:
        results = [_corpus_worker(t) for t in tasks]
    records, preds, skipped = [], [], 0
    for contract_id, record, analysis, error in results:
        if error is not None:
            skipped += 1
            click.echo(f"skip {contract_id}: {error}", err=True)
            continue
        records.append(record)
        preds.append(
            {
                "contract_id": contract_id,
                "score": 1.0 if analysis.verdict == VULNERABLE else 0.0,
                "predicted_label": analysis.verdict == VULNERABLE,
                "threshold_used": 0.5,
                "path_risks": [
                    {"path_id": p["id"],
                     "predicted": ("LOW", "MEDIUM", "HIGH")[p["risk_index"]]}
                    for p in record["paths"]
                ],
            }
        )
    if not records:
        click.echo("error: no contracts processed", err=True)
        sys.exit(EXIT_PARSE)
    write_jsonl(out_path, records)
    if preds_path:
        write_jsonl(preds_path, preds)
    click.echo(f"processed {len(records)} contracts, skipped {skipped}")


@main.command()
@click.argument("files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", default="features.jsonl", show_default=True)
@click.pass_obj
def export(config, files, out_path):
    """Export analyzed contracts as unlabeled JSONL feature records."""
    records = []
    try:
        for path in files:
            for r in _analyze_file(path, config):
                records.append(
                    export_contract(r.graph, r.assessments, r.contract_id)
                )
    except SentinelError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(_frontend_exit(exc))
    write_jsonl(out_path, records)
    click.echo(f"wrote {len(records)} records to {out_path}")


@main.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--counts", "counts_spec", required=True,
              help="Comma-separated category=N pairs, e.g. VulnModulo=5,SafeLogging=5.")
def gen(seed, out_dir, counts_spec):
    """Generate a labeled synthetic corpus with manifest.json."""
    counts = {}
    for item in counts_spec.split(","):
        category, _, n = item.partition("=")
        category = category.strip()
        if category not in corpus_mod.CATEGORIES:
            raise click.BadParameter(f"unknown category {category!r}")
        counts[category] = int(n)
    manifest = corpus_mod.generate(seed, counts, out_dir)
    click.echo(f"generated {len(manifest['entries'])} contracts in {out_dir}")


def _path_risk_accuracy(predictions, expected_by_id):
    hits = total = 0
    for pred in predictions:
        expected = expected_by_id.get(pred.contract_id)
        if expected is None:
            continue
        expected = [r for r in expected if r != "SAFE"]
        got = sorted(p["predicted"] for p in pred.path_risks)
        want = sorted(expected)
        if not got and not want:
            continue
        total += max(len(got), len(want))
        hits += sum(1 for g, w in zip(got, want) if g == w)
    return (hits / total) if total else None


@main.command()
@click.option("--preds", "preds_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--threshold", default=None, type=float,
              help="Fixed decision threshold (default: threshold_used in preds).")
@click.option("--optimize-threshold", "objective",
              type=click.Choice(["f1", "recall"]), default=None)
@click.option("--out", "out_dir", default=".", show_default=True,
              type=click.Path(file_okay=False))
@click.option("--figures/--no-figures", default=True, show_default=True)
def score(preds_path, manifest_path, threshold, objective, out_dir, figures):
    """Score predictions against manifest labels; write metrics and figures."""
    try:
        predictions = import_predictions(preds_path)
    except SchemaError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    truth = {e["contract_id"]: e["vulnerable"] for e in manifest["entries"]}
    expected_risks = {
        e["contract_id"]: e["expected_path_risks"] for e in manifest["entries"]
    }
    scores = {p.contract_id: p.score for p in predictions}
    if {truth.get(c) for c in scores} != {True, False}:
        click.echo("error: labels are degenerate (single class)", err=True)
        sys.exit(EXIT_DEGENERATE)
    try:
        if objective == "f1":
            _, result = metrics_mod.optimize_threshold(
                scores, truth, metrics_mod.OBJECTIVE_F1
            )
        elif objective == "recall":
            _, result = metrics_mod.optimize_threshold(
                scores, truth, metrics_mod.OBJECTIVE_RECALL
            )
        else:
            used = threshold if threshold is not None else (
                predictions[0].threshold_used if predictions else 0.5
            )
            result = metrics_mod.evaluate_at(scores, truth, used)
    except (DegenerateLabels, SentinelError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DEGENERATE)
    result.pra = _path_risk_accuracy(predictions, expected_risks)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "metrics.json").write_text(
        json.dumps(result.to_json(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    report_mod.write_summary_csv(result, out / "summary.csv")
    if figures:
        if result.auc_roc is not None:
            report_mod.render_roc(scores, truth, result.auc_roc, out / "roc.png")
        report_mod.render_confusion(result.cm, out / "confusion.png")
    click.echo(json.dumps(result.to_json(), sort_keys=True))


if __name__ == "__main__":
    main()
