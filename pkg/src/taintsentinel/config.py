"""Analysis configuration with compiled-in defaults.

Decay factors, the propagation threshold, path caps and keyword lists can
be overridden from a TOML or JSON file (``--config`` or the
``SENTINEL_CONFIG`` environment variable).
"""

from __future__ import annotations

import json
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, replace

GAMBLING_KEYWORDS = (
    "lottery",
    "lotto",
    "gambl",
    "casino",
    "bet",
    "jackpot",
    "prize",
    "winner",
    "raffle",
)


@dataclass(frozen=True)
class AnalysisConfig:
    decay_control: float = 1.0
    decay_data: float = 0.85
    decay_state: float = 0.70
    taint_threshold: float = 0.1
    max_path_len: int = 24
    max_paths: int = 256
    gambling_keywords: tuple[str, ...] = GAMBLING_KEYWORDS

    def edge_factor(self, kind: str) -> float:
        if kind == "Control":
            return self.decay_control
        if kind == "Data":
            return self.decay_data
        if kind == "State":
            return self.decay_state
        raise ValueError(f"unknown edge kind {kind!r}")


DEFAULT_CONFIG = AnalysisConfig()

_FIELDS = {
    "decay_control",
    "decay_data",
    "decay_state",
    "taint_threshold",
    "max_path_len",
    "max_paths",
    "gambling_keywords",
}


def load_config(path: str | None = None) -> AnalysisConfig:
    """Load overrides from `path`, SENTINEL_CONFIG, or return the defaults."""
    path = path or os.environ.get("SENTINEL_CONFIG")
    if not path:
        return DEFAULT_CONFIG
    if path.endswith(".toml"):
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    else:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    overrides = {}
    for key, value in raw.items():
        if key not in _FIELDS:
            raise ValueError(f"unknown config key {key!r}")
        if key == "gambling_keywords":
            value = tuple(value)
        overrides[key] = value
    return replace(DEFAULT_CONFIG, **overrides)
