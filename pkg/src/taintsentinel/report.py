"""Rendering of scoring artifacts: delimited summaries and figures."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .metrics import ConfusionMatrix, MetricsReport


def roc_points(scores: dict[str, float], truth: dict[str, bool]):
    """(fpr, tpr) pairs swept over descending score thresholds."""
    pos = sum(1 for cid in scores if truth[cid])
    neg = len(scores) - pos
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    points = [(0.0, 0.0)]
    tp = fp = 0
    last_score = None
    for cid, score in ranked:
        if last_score is not None and score != last_score:
            points.append((fp / neg if neg else 0.0, tp / pos if pos else 0.0))
        if truth[cid]:
            tp += 1
        else:
            fp += 1
        last_score = score
    points.append((fp / neg if neg else 0.0, tp / pos if pos else 0.0))
    return points


def render_roc(scores, truth, auc, out_path: str | Path) -> Path:
    points = roc_points(scores, truth)
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(xs, ys, color="#1f77b4", lw=2, label=f"AUC = {auc:.3f}")
    ax.plot([0, 1], [0, 1], color="grey", ls="--", lw=1)
    ax.set_xlabel("False positive rate")
    ax.set_ylabel("True positive rate")
    ax.set_title("ROC")
    ax.legend(loc="lower right")
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return out_path


def render_confusion(cm: ConfusionMatrix, out_path: str | Path) -> Path:
    grid = [[cm.tp, cm.fn], [cm.fp, cm.tn]]
    fig, ax = plt.subplots(figsize=(4.5, 4))
    im = ax.imshow(grid, cmap="Blues")
    ax.set_xticks([0, 1], labels=["pred vulnerable", "pred safe"])
    ax.set_yticks([0, 1], labels=["vulnerable", "safe"])
    peak = max(max(row) for row in grid) or 1
    for r in range(2):
        for c in range(2):
            color = "white" if grid[r][c] > peak / 2 else "black"
            ax.text(c, r, str(grid[r][c]), ha="center", va="center", color=color)
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_title("Confusion matrix")
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return out_path


def write_summary_csv(report: MetricsReport, out_path: str | Path) -> Path:
    out_path = Path(out_path)
    rows = [
        ("precision", f"{report.precision:.6f}"),
        ("recall", f"{report.recall:.6f}"),
        ("f1", f"{report.f1:.6f}"),
        ("auc_roc", "" if report.auc_roc is None else f"{report.auc_roc:.6f}"),
        ("path_risk_accuracy", "" if report.pra is None else f"{report.pra:.6f}"),
        ("threshold", f"{report.threshold:.6f}"),
        ("tp", str(report.cm.tp)),
        ("fn", str(report.cm.fn)),
        ("fp", str(report.cm.fp)),
        ("tn", str(report.cm.tn)),
    ]
    with out_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("metric", "value"))
        writer.writerows(rows)
    return out_path
