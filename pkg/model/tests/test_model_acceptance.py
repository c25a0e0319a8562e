"""Acceptance gate for the dual-stream classifier.

Each test prints one PASS line with the measured values. The trained model,
corpora, and metrics all flow through the public CLIs (`sentinel gen/corpus/
score`, `sentinel-model train/predict`), never through internal imports.
"""

import csv

TRAINING_BUDGET_SECONDS = 900.0


def majority_baseline_f1(manifest_path) -> float:
    import json

    entries = json.loads(manifest_path.read_text(encoding="utf-8"))["entries"]
    positives = sum(1 for e in entries if e["vulnerable"])
    total = len(entries)
    # Best constant predictor: all-positive yields 2p/(p+total); all-negative 0.
    return max(0.0, 2 * positives / (positives + total))


def test_balanced_corpus_classification_quality(pipeline):
    preds = pipeline.predict(
        pipeline.balanced_features, pipeline.work_dir / "balanced_preds.jsonl"
    )
    metrics = pipeline.score(
        preds, pipeline.balanced_manifest, pipeline.work_dir / "balanced_metrics"
    )
    baseline = majority_baseline_f1(pipeline.balanced_manifest)
    assert metrics["f1"] >= 0.85, metrics
    assert metrics["pra"] >= 0.80, metrics
    assert metrics["f1"] > baseline
    print(
        f"PASS: balanced held-out corpus f1={metrics['f1']:.3f} (>=0.85, "
        f"baseline {baseline:.3f}), path-risk accuracy={metrics['pra']:.3f} (>=0.80)"
    )


def test_training_budget_and_log_consistency(pipeline):
    assert pipeline.training_seconds < TRAINING_BUDGET_SECONDS
    with open(pipeline.log_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert rows, "training log is empty"
    assert list(rows[0]) == [
        "epoch", "train_loss", "val_loss", "val_f1",
        "train_cls_loss", "train_risk_loss",
    ]
    for row in rows:
        combined = float(row["train_cls_loss"]) + 0.3 * float(row["train_risk_loss"])
        assert abs(float(row["train_loss"]) - combined) < 1e-6
    print(
        f"PASS: training completed in {pipeline.training_seconds:.1f}s "
        f"(<{TRAINING_BUDGET_SECONDS:.0f}s) over {len(rows)} epochs; every log row "
        f"satisfies total = classification + 0.3 * risk"
    )


def test_threshold_tradeoff_on_imbalanced_corpus(pipeline):
    preds = pipeline.predict(
        pipeline.imbalanced_features, pipeline.work_dir / "imbalanced_preds.jsonl"
    )
    default = pipeline.score(
        preds, pipeline.imbalanced_manifest, pipeline.work_dir / "imb_default"
    )
    optimized = pipeline.score(
        preds, pipeline.imbalanced_manifest, pipeline.work_dir / "imb_recall",
        "--optimize-threshold", "recall",
    )
    assert optimized["recall"] > default["recall"], (default, optimized)
    assert optimized["precision"] < default["precision"], (default, optimized)
    assert optimized["precision"] >= 0.5, optimized
    print(
        "PASS: recall-optimized threshold "
        f"{optimized['threshold']:.3f} raises recall "
        f"{default['recall']:.3f}->{optimized['recall']:.3f} and lowers precision "
        f"{default['precision']:.3f}->{optimized['precision']:.3f} "
        "(precision floor 0.5 held)"
    )
