"""Classification metrics: confusion matrix, precision/recall/F1, AUC-ROC,
path risk accuracy and threshold optimization."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateLabels, EmptyPaths, MissingLabel

OBJECTIVE_F1 = "F1"
OBJECTIVE_RECALL = "RecallAtPrecisionFloor"

DEFAULT_PRECISION_FLOOR = 0.5


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fn, self.fp, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self):
        return self.tp + self.fn + self.fp + self.tn

    def to_json(self):
        return {"tp": self.tp, "fn": self.fn, "fp": self.fp, "tn": self.tn}


@dataclass
class MetricsReport:
    precision: float
    recall: float
    f1: float
    auc_roc: float | None
    threshold: float
    cm: ConfusionMatrix
    pra: float | None = None

    def to_json(self):
        out = {
            "schema_version": "1",
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "threshold": self.threshold,
            "confusion_matrix": self.cm.to_json(),
        }
        if self.auc_roc is not None:
            out["auc_roc"] = self.auc_roc
        if self.pra is not None:
            out["pra"] = self.pra
        return out


def confusion(
    scores: dict[str, float], truth: dict[str, bool], threshold: float
) -> ConfusionMatrix:
    """Partition contracts by (score >= threshold) against ground truth."""
    tp = fn = fp = tn = 0
    for contract_id, score in scores.items():
        if contract_id not in truth:
            raise MissingLabel(contract_id)
        predicted = score >= threshold
        actual = truth[contract_id]
        if predicted and actual:
            tp += 1
        elif not predicted and actual:
            fn += 1
        elif predicted and not actual:
            fp += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fn, fp, tn)


def precision_recall_f1(cm: ConfusionMatrix) -> tuple[float, float, float]:
    """Zero-denominator convention: degenerate predictors score 0."""
    precision = cm.tp / (cm.tp + cm.fp) if cm.tp + cm.fp else 0.0
    recall = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall
        else 0.0
    )
    return precision, recall, f1


def auc_roc(scores: list[float], labels: list[bool]) -> float:
    """Mann-Whitney rank statistic with half credit for ties; equals
    trapezoidal integration of the ROC curve."""
    positives = [s for s, l in zip(scores, labels) if l]
    negatives = [s for s, l in zip(scores, labels) if not l]
    if not positives or not negatives:
        raise DegenerateLabels("need at least one positive and one negative")
    wins = 0.0
    sorted_neg = sorted(negatives)
    import bisect

    for p in positives:
        lo = bisect.bisect_left(sorted_neg, p)
        hi = bisect.bisect_right(sorted_neg, p)
        wins += lo + 0.5 * (hi - lo)
    return wins / (len(positives) * len(negatives))


def path_risk_accuracy(predicted: list[str], actual: list[str]) -> float:
    """Fraction of paths with exactly matching risk class."""
    if not predicted or len(predicted) != len(actual):
        raise EmptyPaths("risk lists must be nonempty and equal length")
    hits = sum(1 for p, a in zip(predicted, actual) if p == a)
    return hits / len(predicted)


def _candidate_thresholds(scores: list[float]) -> list[float]:
    uniq = sorted(set(scores))
    candidates = {0.05, 0.5}
    for a, b in zip(uniq, uniq[1:]):
        candidates.add((a + b) / 2.0)
    return sorted(candidates)


def evaluate_at(
    scores: dict[str, float], truth: dict[str, bool], threshold: float
) -> MetricsReport:
    cm = confusion(scores, truth, threshold)
    precision, recall, f1 = precision_recall_f1(cm)
    ordered = sorted(scores)
    score_list = [scores[c] for c in ordered]
    label_list = [truth[c] for c in ordered]
    try:
        auc = auc_roc(score_list, label_list)
    except DegenerateLabels:
        auc = None
    return MetricsReport(precision, recall, f1, auc, threshold, cm)


def optimize_threshold(
    scores: dict[str, float],
    truth: dict[str, bool],
    objective: str = OBJECTIVE_F1,
    precision_floor: float = DEFAULT_PRECISION_FLOOR,
) -> tuple[float, MetricsReport]:
    """Sweep unique-score midpoints plus {0.05, 0.5}; argmax of the
    objective, ties broken by the lower threshold."""
    labels = set(truth[c] for c in scores)
    if labels != {True, False}:
        raise DegenerateLabels("threshold optimization needs both classes")
    best = None
    for threshold in _candidate_thresholds(list(scores.values())):
        cm = confusion(scores, truth, threshold)
        precision, recall, f1 = precision_recall_f1(cm)
        if objective == OBJECTIVE_F1:
            value = f1
        elif objective == OBJECTIVE_RECALL:
            value = recall if precision >= precision_floor else float("-inf")
        else:
            raise ValueError(f"unknown objective {objective!r}")
        if best is None or value > best[0]:
            best = (value, threshold)
    threshold = best[1]
    return threshold, evaluate_at(scores, truth, threshold)
