"""Helpers for building synthetic contract feature records."""

import json

NODE_KINDS = 11


def make_record(contract_id: str, vulnerable: bool, with_label: bool = True) -> dict:
    """A five-node record; vulnerable ones carry one high-risk path."""
    nodes = []
    for i in range(5):
        onehot = [0] * NODE_KINDS
        onehot[i % NODE_KINDS] = 1
        nodes.append(
            {
                "id": i,
                "kind_onehot": onehot,
                "taint": 0.85 if (vulnerable and i > 0) else 0.05 * i,
                "source_sensitivity": 1.0 if (vulnerable and i == 1) else 0.0,
                "sink_risk": 1.0 if (vulnerable and i == 4) else 0.0,
            }
        )
    edges = [{"src": i, "dst": i + 1, "kind": "Control"} for i in range(4)]
    paths = []
    if vulnerable:
        paths = [
            {
                "id": 0,
                "nodes": [1, 2, 3, 4],
                "features": [4 / 24, 0.85, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.25],
                "risk_index": 2,
            }
        ]
    record = {
        "schema_version": "1",
        "contract_id": contract_id,
        "nodes": nodes,
        "edges": edges,
        "paths": paths,
    }
    if with_label:
        record["label"] = {"vulnerable": vulnerable}
    return record


def write_records(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def tiny_dataset(n_per_class: int = 12) -> list[dict]:
    records = []
    for i in range(n_per_class):
        records.append(make_record(f"vuln_{i:03d}", True))
        records.append(make_record(f"safe_{i:03d}", False))
    return records
