"""Graduated taint analysis and path-level risk scoring for Solidity."""

from .config import DEFAULT_CONFIG, AnalysisConfig, load_config
from .pipeline import (
    SAFE_VERDICT,
    SUSPICIOUS,
    VULNERABLE,
    AnalysisReport,
    analyze_contract,
    run_pipeline,
)

__all__ = [
    "AnalysisConfig",
    "AnalysisReport",
    "DEFAULT_CONFIG",
    "SAFE_VERDICT",
    "SUSPICIOUS",
    "VULNERABLE",
    "analyze_contract",
    "load_config",
    "run_pipeline",
]

__version__ = "0.1.0"
