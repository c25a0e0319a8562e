"""`sentinel-model` command-line interface: train and predict."""

from __future__ import annotations

import json
import sys
from dataclasses import replace

import click

from .config import load_model_config
from .data import RecordError, load_contracts
from .train import load_model, predict, train


@click.group()
def main():
    """Dual-stream contract vulnerability classifier."""


@main.command(name="train")
@click.option("--features", "features_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Labeled features.jsonl produced by the analyzer.")
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="TOML/JSON hyperparameter overrides.")
@click.option("--seed", default=None, type=int, help="Override the config seed.")
@click.option("--model", "model_path", default="model.bin", show_default=True)
@click.option("--log", "log_path", default="training_log.csv", show_default=True)
def train_cmd(features_path, config_path, seed, model_path, log_path):
    """Train on labeled contract records and save model + training log."""
    config = load_model_config(config_path)
    if seed is not None:
        config = replace(config, seed=seed)
    try:
        graphs = load_contracts(features_path)
    except RecordError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    train(graphs, config, model_path, log_path)
    click.echo(f"trained on {len(graphs)} contracts; model saved to {model_path}")


@main.command(name="predict")
@click.option("--features", "features_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", default="preds.jsonl", show_default=True)
@click.option("--threshold", default=None, type=float,
              help="Decision threshold (default: the trained config value).")
def predict_cmd(features_path, model_path, out_path, threshold):
    """Score contract records and write one prediction per line."""
    model, config = load_model(model_path)
    try:
        graphs = load_contracts(features_path)
    except RecordError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    used = config.threshold if threshold is None else threshold
    records = predict(model, graphs, used)
    with open(out_path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    click.echo(f"wrote {len(records)} predictions to {out_path}")


if __name__ == "__main__":
    main()
