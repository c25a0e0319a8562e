"""Loading of contract feature records (features.jsonl, schema 1).

Record layout per line: nodes with a kind one-hot plus taint,
source_sensitivity, and sink_risk scalars; directed edges; risk-labeled
paths carrying 10 numeric features; an optional vulnerability label.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import torch

SCHEMA_VERSION = "1"

RISK_NAMES = ("LOW", "MEDIUM", "HIGH")


class RecordError(ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass
class ContractGraph:
    contract_id: str
    x: torch.Tensor            # [n, node_feature_dim]
    adj: torch.Tensor          # [n, n] symmetric-normalized with self-loops
    path_nodes: list[torch.Tensor]   # per path: node index sequence
    path_features: torch.Tensor      # [p, path_feature_dim]
    path_risks: torch.Tensor         # [p] class indices
    path_ids: list[int] = None       # original ids from the exporting side
    label: int | None = None

    @property
    def num_paths(self) -> int:
        return len(self.path_nodes)


def normalized_adjacency(n: int, edges: list[tuple[int, int]]) -> torch.Tensor:
    """D^-1/2 (A + I) D^-1/2 over the undirected edge set."""
    adj = torch.eye(n)
    for src, dst in edges:
        adj[src, dst] = 1.0
        adj[dst, src] = 1.0
    degree = adj.sum(dim=1)
    inv_sqrt = degree.pow(-0.5)
    return adj * inv_sqrt.unsqueeze(0) * inv_sqrt.unsqueeze(1)


def _node_vector(node: dict) -> list[float]:
    return list(map(float, node["kind_onehot"])) + [
        float(node["taint"]),
        float(node["source_sensitivity"]),
        float(node["sink_risk"]),
    ]


def record_to_graph(record: dict, line: int | None = None) -> ContractGraph:
    if record.get("schema_version") != SCHEMA_VERSION:
        raise RecordError(
            f"unsupported schema_version {record.get('schema_version')!r}", line
        )
    nodes = sorted(record["nodes"], key=lambda n: n["id"])
    n = len(nodes)
    if [node["id"] for node in nodes] != list(range(n)):
        raise RecordError("node ids are not dense", line)
    x = (
        torch.tensor([_node_vector(node) for node in nodes], dtype=torch.float32)
        if n
        else torch.zeros((0, 14))
    )
    edges = [(e["src"], e["dst"]) for e in record.get("edges", [])]
    if any(not (0 <= a < n and 0 <= b < n) for a, b in edges):
        raise RecordError("edge endpoint out of range", line)
    adj = normalized_adjacency(n, edges) if n else torch.zeros((0, 0))
    path_nodes, feats, risks, ids = [], [], [], []
    for path in record.get("paths", []):
        idx = path["nodes"]
        if any(not 0 <= i < n for i in idx):
            raise RecordError(f"path {path.get('id')} references missing node", line)
        if not 0 <= path["risk_index"] < len(RISK_NAMES):
            raise RecordError(f"bad risk_index {path['risk_index']}", line)
        path_nodes.append(torch.tensor(idx, dtype=torch.long))
        feats.append([float(v) for v in path["features"]])
        risks.append(int(path["risk_index"]))
        ids.append(int(path["id"]))
    label = record.get("label")
    return ContractGraph(
        contract_id=record["contract_id"],
        x=x,
        adj=adj,
        path_nodes=path_nodes,
        path_features=torch.tensor(feats, dtype=torch.float32)
        if feats
        else torch.zeros((0, 10)),
        path_risks=torch.tensor(risks, dtype=torch.long),
        path_ids=ids,
        label=None if label is None else int(bool(label["vulnerable"])),
    )


def load_contracts(path: str) -> list[ContractGraph]:
    graphs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                record = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise RecordError(str(exc), lineno) from exc
            graphs.append(record_to_graph(record, lineno))
    return graphs
