"""Model hyperparameters with compiled-in defaults, loadable from TOML/JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


@dataclass(frozen=True)
class ModelConfig:
    node_feature_dim: int = 14
    path_feature_dim: int = 10
    gcn_hidden: int = 128
    global_dim: int = 256       # [mean ; max] pooled GCN output
    lstm_hidden: int = 32
    path_dim: int = 64          # per-path embedding and aggregate size
    fused_input_dim: int = 320  # global_dim + path_dim
    fused_dim: int = 128
    num_classes: int = 2
    risk_classes: int = 3       # LOW / MEDIUM / HIGH
    risk_loss_weight: float = 0.3
    learning_rate: float = 1e-3
    max_epochs: int = 50
    patience: int = 8
    batch_size: int = 16
    val_fraction: float = 0.2
    threshold: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.global_dim != 2 * self.gcn_hidden:
            raise ValueError("global_dim must equal 2 * gcn_hidden")
        if self.fused_input_dim != self.global_dim + self.path_dim:
            raise ValueError("fused_input_dim must equal global_dim + path_dim")
        if not 0.0 < self.val_fraction < 1.0:
            raise ValueError("val_fraction must lie in (0, 1)")


DEFAULT_MODEL_CONFIG = ModelConfig()


def load_model_config(path: str | None = None) -> ModelConfig:
    if not path:
        return DEFAULT_MODEL_CONFIG
    if path.endswith(".toml"):
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    else:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    return replace(DEFAULT_MODEL_CONFIG, **raw)
