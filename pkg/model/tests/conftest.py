"""Session fixtures for the dual-stream model tests.

The acceptance pipeline exercises the real external interface: corpora are
generated and analyzed with the `sentinel` CLI, the model is trained and run
with the `sentinel-model` CLI, and metrics come from `sentinel score`.
"""

import json
import subprocess
import time
from dataclasses import dataclass
from pathlib import Path

import pytest

TRAIN_COUNTS = (
    "VulnModulo=55,VulnKeccakRNG=55,VulnLottery=55,VulnBlockhash=55,"
    "BorderlineVuln=15,SafeTimeLock=50,SafeLogging=50,SafeCooldown=50,"
    "NeutralArithmetic=30,BorderlineSafe=30"
)
BALANCED_TEST_COUNTS = (
    "VulnModulo=11,VulnKeccakRNG=11,VulnLottery=11,VulnBlockhash=11,"
    "BorderlineVuln=4,SafeTimeLock=15,SafeLogging=15,SafeCooldown=14,"
    "BorderlineSafe=4"
)
IMBALANCED_TEST_COUNTS = (
    "VulnModulo=2,VulnLottery=2,BorderlineVuln=4,SafeTimeLock=30,"
    "SafeLogging=30,SafeCooldown=18,NeutralArithmetic=10,BorderlineSafe=4"
)


def run_cli(*argv, cwd=None):
    result = subprocess.run(
        list(argv), cwd=cwd, capture_output=True, text=True
    )
    if result.returncode != 0:
        raise AssertionError(
            f"{argv} failed ({result.returncode}):\n{result.stdout}\n{result.stderr}"
        )
    return result


def build_corpus(root: Path, name: str, seed: int, counts: str) -> tuple[Path, Path]:
    """Generate and analyze one corpus; returns (features.jsonl, manifest.json)."""
    out_dir = root / name
    run_cli("sentinel", "gen", "--seed", str(seed), "--out", str(out_dir),
            "--counts", counts)
    features = root / f"{name}_features.jsonl"
    run_cli("sentinel", "corpus", str(out_dir), "--out", str(features))
    return features, out_dir / "manifest.json"


@dataclass
class TrainedPipeline:
    model_path: Path
    log_path: Path
    training_seconds: float
    balanced_features: Path
    balanced_manifest: Path
    imbalanced_features: Path
    imbalanced_manifest: Path
    work_dir: Path

    def predict(self, features: Path, out: Path, threshold: float | None = None):
        argv = ["sentinel-model", "predict", "--features", str(features),
                "--model", str(self.model_path), "--out", str(out)]
        if threshold is not None:
            argv += ["--threshold", str(threshold)]
        run_cli(*argv)
        return out

    def score(self, preds: Path, manifest: Path, out: Path, *extra) -> dict:
        run_cli("sentinel", "score", "--preds", str(preds),
                "--manifest", str(manifest), "--out", str(out),
                "--no-figures", *extra)
        return json.loads((out / "metrics.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def pipeline(tmp_path_factory) -> TrainedPipeline:
    root = tmp_path_factory.mktemp("model_acceptance")
    train_features, _ = build_corpus(root, "train", 101, TRAIN_COUNTS)
    bal_features, bal_manifest = build_corpus(
        root, "balanced_test", 202, BALANCED_TEST_COUNTS
    )
    imb_features, imb_manifest = build_corpus(
        root, "imbalanced_test", 303, IMBALANCED_TEST_COUNTS
    )
    model_path = root / "model.bin"
    log_path = root / "training_log.csv"
    started = time.monotonic()
    run_cli("sentinel-model", "train", "--features", str(train_features),
            "--seed", "0", "--model", str(model_path), "--log", str(log_path))
    elapsed = time.monotonic() - started
    return TrainedPipeline(
        model_path=model_path,
        log_path=log_path,
        training_seconds=elapsed,
        balanced_features=bal_features,
        balanced_manifest=bal_manifest,
        imbalanced_features=imb_features,
        imbalanced_manifest=imb_manifest,
        work_dir=root,
    )
