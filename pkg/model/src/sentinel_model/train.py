"""Training loop with a dual objective and deterministic seeding.

Total loss = classification cross-entropy + weight * path-risk
cross-entropy, where the risk term is averaged over paths within each
contract and then over the path-bearing contracts of the batch.
"""

from __future__ import annotations

import csv
import random
from dataclasses import asdict

import torch
from torch import nn

from .config import ModelConfig
from .data import ContractGraph
from .network import DualStreamModel

MODEL_FORMAT = "sentinel-model/1"


def set_seed(seed: int):
    random.seed(seed)
    torch.manual_seed(seed)


def f1_score(predicted: list[bool], actual: list[bool]) -> float:
    tp = sum(1 for p, a in zip(predicted, actual) if p and a)
    fp = sum(1 for p, a in zip(predicted, actual) if p and not a)
    fn = sum(1 for p, a in zip(predicted, actual) if not p and a)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return (
        2 * precision * recall / (precision + recall) if precision + recall else 0.0
    )


def batch_loss(
    model: DualStreamModel, batch: list[ContractGraph], weight: float
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """(total, classification, risk) losses for one batch."""
    ce = nn.functional.cross_entropy
    cls_terms, risk_terms = [], []
    for graph in batch:
        out = model(graph)
        target = torch.tensor(graph.label, dtype=torch.long)
        cls_terms.append(ce(out["logits"].unsqueeze(0), target.unsqueeze(0)))
        if graph.num_paths:
            risk_terms.append(ce(out["path_logits"], graph.path_risks))
    cls_loss = torch.stack(cls_terms).mean()
    risk_loss = (
        torch.stack(risk_terms).mean() if risk_terms else torch.tensor(0.0)
    )
    return cls_loss + weight * risk_loss, cls_loss, risk_loss


def stratified_split(
    graphs: list[ContractGraph], val_fraction: float, rng: random.Random
) -> tuple[list[ContractGraph], list[ContractGraph]]:
    train, val = [], []
    for label in (0, 1):
        bucket = [g for g in graphs if g.label == label]
        rng.shuffle(bucket)
        k = max(1, round(len(bucket) * val_fraction)) if bucket else 0
        val.extend(bucket[:k])
        train.extend(bucket[k:])
    rng.shuffle(train)
    return train, val


def evaluate(
    model: DualStreamModel, graphs: list[ContractGraph], config: ModelConfig
) -> tuple[float, float]:
    """(loss, F1 at the configured threshold) without gradients."""
    model.eval()
    with torch.no_grad():
        loss, _, _ = batch_loss(model, graphs, config.risk_loss_weight)
        predicted, actual = [], []
        for graph in graphs:
            probability, _ = model.score(graph)
            predicted.append(probability >= config.threshold)
            actual.append(bool(graph.label))
    model.train()
    return loss.item(), f1_score(predicted, actual)


def train(
    graphs: list[ContractGraph],
    config: ModelConfig,
    model_path: str,
    log_path: str,
) -> DualStreamModel:
    if any(g.label is None for g in graphs):
        raise ValueError("training requires labeled contracts")
    labels = {g.label for g in graphs}
    if labels != {0, 1}:
        raise ValueError("training requires both classes")
    set_seed(config.seed)
    rng = random.Random(config.seed)
    model = DualStreamModel(config)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    train_set, val_set = stratified_split(graphs, config.val_fraction, rng)

    best_f1 = -1.0
    best_state = None
    stale = 0
    rows = []
    for epoch in range(1, config.max_epochs + 1):
        rng.shuffle(train_set)
        epoch_total = epoch_cls = epoch_risk = 0.0
        batches = 0
        for i in range(0, len(train_set), config.batch_size):
            batch = train_set[i : i + config.batch_size]
            total, cls_loss, risk_loss = batch_loss(
                model, batch, config.risk_loss_weight
            )
            optimizer.zero_grad()
            total.backward()
            optimizer.step()
            epoch_total += total.item()
            epoch_cls += cls_loss.item()
            epoch_risk += risk_loss.item()
            batches += 1
        val_loss, val_f1 = evaluate(model, val_set, config)
        rows.append(
            {
                "epoch": epoch,
                "train_loss": epoch_total / batches,
                "val_loss": val_loss,
                "val_f1": val_f1,
                "train_cls_loss": epoch_cls / batches,
                "train_risk_loss": epoch_risk / batches,
            }
        )
        if val_f1 > best_f1:
            best_f1 = val_f1
            best_state = {k: v.clone() for k, v in model.state_dict().items()}
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                break
    if best_state is not None:
        model.load_state_dict(best_state)
    with open(log_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    save_model(model, config, model_path)
    return model


def save_model(model: DualStreamModel, config: ModelConfig, path: str):
    torch.save(
        {
            "format": MODEL_FORMAT,
            "config": asdict(config),
            "state_dict": model.state_dict(),
        },
        path,
    )


def load_model(path: str) -> tuple[DualStreamModel, ModelConfig]:
    payload = torch.load(path, map_location="cpu", weights_only=True)
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"unrecognized model file format {payload.get('format')!r}")
    config = ModelConfig(**payload["config"])
    model = DualStreamModel(config)
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, config


def predict(
    model: DualStreamModel,
    graphs: list[ContractGraph],
    threshold: float,
) -> list[dict]:
    """One prediction record per contract, in input order."""
    from .data import RISK_NAMES

    records = []
    model.eval()
    for graph in graphs:
        probability, risks = model.score(graph)
        records.append(
            {
                "contract_id": graph.contract_id,
                "score": probability,
                "predicted_label": probability >= threshold,
                "threshold_used": threshold,
                "path_risks": [
                    {"path_id": pid, "predicted": RISK_NAMES[r]}
                    for pid, r in zip(graph.path_ids, risks)
                ],
            }
        )
    return records
