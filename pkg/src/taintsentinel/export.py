"""Versioned JSON serialization shared with the model component.

`ContractRecord` documents: one JSON object per contract, streamed as
JSON-Lines in `features.jsonl`. Node feature vector layout (schema 1):
[one-hot node kind (11), taint, source_sensitivity, sink_risk].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import SchemaError, SerializationError
from .graph import NODE_KIND_ORDER, SemanticGraph
from .rules import HIGH, LOW, MEDIUM, SAFE, PathAssessment
from .taint import SENSITIVITY_SCALE, SINK_RISK_SCALE

SCHEMA_VERSION = "1"

EDGE_KIND_INDEX = {"Control": 0, "Data": 1, "State": 2}
RISK_INDEX = {LOW: 0, MEDIUM: 1, HIGH: 2}
INDEX_RISK = {v: k for k, v in RISK_INDEX.items()}

NODE_FEATURE_DIM = len(NODE_KIND_ORDER) + 3


@dataclass
class PredictionRecord:
    contract_id: str
    score: float
    predicted_label: bool
    threshold_used: float
    path_risks: list[dict] = field(default_factory=list)

    def to_json(self):
        return {
            "contract_id": self.contract_id,
            "score": self.score,
            "predicted_label": self.predicted_label,
            "threshold_used": self.threshold_used,
            "path_risks": self.path_risks,
        }


def _node_row(node) -> dict:
    one_hot = [0] * len(NODE_KIND_ORDER)
    kind_index = NODE_KIND_ORDER.index(node.kind)
    one_hot[kind_index] = 1
    sensitivity = max(
        (SENSITIVITY_SCALE[lbl.sensitivity] for lbl, _ in node.sources),
        default=0.0,
    )
    sink_risk = SINK_RISK_SCALE[node.sink[0].risk] if node.sink else 0.0
    return {
        "id": node.id,
        "kind": node.kind,
        "kind_index": kind_index,
        "kind_onehot": one_hot,
        "taint": node.taint,
        "source_sensitivity": sensitivity,
        "sink_risk": sink_risk,
    }


def export_contract(
    graph: SemanticGraph,
    assessments: list[PathAssessment],
    contract_id: str,
    label: bool | None = None,
) -> dict:
    """Serialize one analyzed contract; SAFE paths are report-only and
    excluded from the model-facing path table."""
    record = {
        "schema_version": SCHEMA_VERSION,
        "contract_id": contract_id,
        "nodes": [_node_row(n) for n in graph.nodes],
        "edges": [
            {"src": e.src, "dst": e.dst, "kind_index": EDGE_KIND_INDEX[e.kind]}
            for e in graph.edges
        ],
        "paths": [
            {
                "id": a.path.id,
                "nodes": list(a.path.node_seq),
                "features": list(a.path.features),
                "risk_index": RISK_INDEX[a.risk],
            }
            for a in sorted(
                (a for a in assessments if a.risk != SAFE),
                key=lambda a: a.path.id,
            )
        ],
    }
    if label is not None:
        record["label"] = {"vulnerable": bool(label)}
    for path in record["paths"]:
        if not all(math.isfinite(v) for v in path["features"]):
            raise SerializationError(
                f"non-finite feature in path {path['id']} of {contract_id}"
            )
    for node in record["nodes"]:
        if not math.isfinite(node["taint"]):
            raise SerializationError(f"non-finite taint in {contract_id}")
    return record


def node_feature_vector(node_row: dict) -> list[float]:
    """Flat per-node feature layout consumed by the model component."""
    return list(map(float, node_row["kind_onehot"])) + [
        node_row["taint"],
        node_row["source_sensitivity"],
        node_row["sink_risk"],
    ]


def validate_contract_record(record: dict, line: int | None = None) -> dict:
    if record.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(
            f"schema_version {record.get('schema_version')!r} != {SCHEMA_VERSION}",
            line,
        )
    n = len(record.get("nodes", []))
    for node in record["nodes"]:
        if sum(node["kind_onehot"]) != 1:
            raise SchemaError(f"node {node['id']} one-hot is not one-hot", line)
    for edge in record.get("edges", []):
        if not (0 <= edge["src"] < n and 0 <= edge["dst"] < n):
            raise SchemaError("edge endpoint out of range", line)
    for path in record.get("paths", []):
        if any(not 0 <= i < n for i in path["nodes"]):
            raise SchemaError(f"path {path['id']} references missing node", line)
        if path["risk_index"] not in INDEX_RISK:
            raise SchemaError(f"bad risk index {path['risk_index']}", line)
    return record


def read_contract_records(path: str) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(str(exc), lineno) from exc
            records.append(validate_contract_record(raw, lineno))
    return records


def import_predictions(path: str) -> list[PredictionRecord]:
    """Parse and validate a preds.jsonl file."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(str(exc), lineno) from exc
            records.append(_validate_prediction(raw, lineno))
    return records


def _validate_prediction(raw: dict, lineno: int) -> PredictionRecord:
    try:
        score = float(raw["score"])
        threshold = float(raw["threshold_used"])
        label = bool(raw["predicted_label"])
        contract_id = str(raw["contract_id"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed record: {exc}", lineno) from exc
    if not 0.0 <= score <= 1.0:
        raise SchemaError(f"score {score} outside [0, 1]", lineno)
    if label != (score >= threshold):
        raise SchemaError(
            "predicted_label inconsistent with score/threshold", lineno
        )
    path_risks = []
    for entry in raw.get("path_risks", []):
        predicted = entry.get("predicted")
        if predicted not in (HIGH, MEDIUM, LOW):
            raise SchemaError(f"bad path risk {predicted!r}", lineno)
        path_risks.append(
            {"path_id": int(entry["path_id"]), "predicted": predicted}
        )
    return PredictionRecord(contract_id, score, label, threshold, path_risks)


def write_jsonl(path: str, records: list[dict]):
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
