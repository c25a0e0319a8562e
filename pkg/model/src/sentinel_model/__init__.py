"""Dual-stream graph/path classifier over exported contract records."""

from .config import DEFAULT_MODEL_CONFIG, ModelConfig, load_model_config
from .data import ContractGraph, load_contracts
from .network import DualStreamModel
from .train import load_model, predict, save_model, train

__all__ = [
    "ContractGraph",
    "DEFAULT_MODEL_CONFIG",
    "DualStreamModel",
    "ModelConfig",
    "load_contracts",
    "load_model",
    "load_model_config",
    "predict",
    "save_model",
    "train",
]

__version__ = "0.1.0"
