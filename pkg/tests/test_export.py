import json

import pytest

from taintsentinel.errors import SchemaError
from taintsentinel.export import (
    NODE_FEATURE_DIM,
    SCHEMA_VERSION,
    export_contract,
    import_predictions,
    node_feature_vector,
    read_contract_records,
    validate_contract_record,
    write_jsonl,
)
from taintsentinel.pipeline import run_pipeline


def record_for(source, label=None):
    (report,) = run_pipeline(source)
    return export_contract(
        report.graph, report.assessments, report.contract_id, label=label
    )


def test_lottery_record_shape(lottery_source):
    record = record_for(lottery_source, label=True)
    assert record["schema_version"] == SCHEMA_VERSION
    assert record["contract_id"] == "VulnerableLottery"
    assert record["label"] == {"vulnerable": True}
    assert len(record["nodes"]) == 5
    assert len(record["paths"]) == 1
    (path,) = record["paths"]
    assert path["risk_index"] == 2  # HIGH
    assert path["nodes"] == [1, 2, 3, 4]
    assert len(path["features"]) == 10
    validate_contract_record(record)


def test_node_rows_are_one_hot(lottery_source):
    record = record_for(lottery_source)
    for node in record["nodes"]:
        assert sum(node["kind_onehot"]) == 1
        assert node["kind_onehot"][node["kind_index"]] == 1
        vec = node_feature_vector(node)
        assert len(vec) == NODE_FEATURE_DIM


def test_safe_paths_excluded_from_model_table():
    record = record_for(
        """
        contract Depot {
            uint256 public deadline;
            function withdraw() public {
                require(block.timestamp >= deadline + 15 minutes);
                payable(msg.sender).transfer(1 ether);
            }
        }
        """
    )
    assert record["paths"] == []


def test_jsonl_roundtrip(tmp_path, lottery_source):
    record = record_for(lottery_source, label=True)
    path = tmp_path / "features.jsonl"
    write_jsonl(str(path), [record])
    (loaded,) = read_contract_records(str(path))
    assert loaded == json.loads(json.dumps(record))


def test_bad_schema_version_reports_line(tmp_path, lottery_source):
    record = record_for(lottery_source)
    record["schema_version"] = "999"
    path = tmp_path / "features.jsonl"
    write_jsonl(str(path), [record])
    with pytest.raises(SchemaError) as err:
        read_contract_records(str(path))
    assert err.value.line == 1


def test_edge_out_of_range_rejected(lottery_source):
    record = record_for(lottery_source)
    record["edges"].append({"src": 0, "dst": 99, "kind_index": 0})
    with pytest.raises(SchemaError):
        validate_contract_record(record)


def _pred(**overrides):
    raw = {
        "contract_id": "c1",
        "score": 0.9,
        "predicted_label": True,
        "threshold_used": 0.5,
        "path_risks": [{"path_id": 0, "predicted": "HIGH"}],
    }
    raw.update(overrides)
    return raw


def write_preds(tmp_path, rows):
    path = tmp_path / "preds.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    return str(path)


def test_import_predictions_roundtrip(tmp_path):
    path = write_preds(tmp_path, [_pred(), _pred(contract_id="c2", score=0.1,
                                               predicted_label=False, path_risks=[])])
    preds = import_predictions(path)
    assert [p.contract_id for p in preds] == ["c1", "c2"]
    assert preds[0].path_risks == [{"path_id": 0, "predicted": "HIGH"}]


def test_import_rejects_score_out_of_range(tmp_path):
    path = write_preds(tmp_path, [_pred(score=1.5)])
    with pytest.raises(SchemaError):
        import_predictions(path)


def test_import_rejects_inconsistent_label(tmp_path):
    path = write_preds(tmp_path, [_pred(predicted_label=False)])
    with pytest.raises(SchemaError):
        import_predictions(path)


def test_import_rejects_unknown_risk_with_line(tmp_path):
    path = write_preds(tmp_path, [_pred(), _pred(path_risks=[{"path_id": 0, "predicted": "SAFE"}])])
    with pytest.raises(SchemaError) as err:
        import_predictions(path)
    assert err.value.line == 2
