"""Dual-stream architecture: a GCN over the whole contract graph fused,
through a sigmoid gate, with an attention aggregate of per-path BiLSTM
embeddings; a shared path embedding feeds the per-path risk head."""

from __future__ import annotations

import torch
from torch import nn

from .config import ModelConfig
from .data import ContractGraph


class GCNLayer(nn.Module):
    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.lin = nn.Linear(in_dim, out_dim)

    def forward(self, x: torch.Tensor, adj: torch.Tensor) -> torch.Tensor:
        return self.lin(adj @ x)


class GlobalEncoder(nn.Module):
    """Three GCN layers followed by [mean ; max] pooling."""

    def __init__(self, config: ModelConfig):
        super().__init__()
        h = config.gcn_hidden
        self.layers = nn.ModuleList(
            [
                GCNLayer(config.node_feature_dim, h),
                GCNLayer(h, h),
                GCNLayer(h, h),
            ]
        )
        self.out_dim = config.global_dim

    def forward(self, x: torch.Tensor, adj: torch.Tensor) -> torch.Tensor:
        if x.shape[0] == 0:
            return torch.zeros(self.out_dim)
        h = x
        for layer in self.layers:
            h = torch.relu(layer(h, adj))
        return torch.cat([h.mean(dim=0), h.max(dim=0).values])


class PathEncoder(nn.Module):
    """BiLSTM over the path's node features, concatenated with the
    10 numeric path features and projected to the path embedding size."""

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.lstm = nn.LSTM(
            config.node_feature_dim,
            config.lstm_hidden,
            batch_first=True,
            bidirectional=True,
        )
        self.proj = nn.Linear(
            2 * config.lstm_hidden + config.path_feature_dim, config.path_dim
        )

    def forward(self, graph: ContractGraph) -> torch.Tensor:
        if graph.num_paths == 0:
            return torch.zeros((0, self.proj.out_features))
        embeddings = []
        for idx, feats in zip(graph.path_nodes, graph.path_features):
            seq = graph.x[idx].unsqueeze(0)
            _, (hidden, _) = self.lstm(seq)
            ends = torch.cat([hidden[0, 0], hidden[1, 0]])
            embeddings.append(self.proj(torch.cat([ends, feats])))
        return torch.stack(embeddings)


class PathAggregator(nn.Module):
    """Attention-weighted sum plus mean and max over path embeddings.

    A contract with no paths yields an exactly-zero aggregate vector.
    """

    def __init__(self, config: ModelConfig):
        super().__init__()
        d = config.path_dim
        self.attention = nn.Linear(d, 1)
        self.out = nn.Linear(3 * d, d)
        self.dim = d

    def forward(self, path_embeddings: torch.Tensor) -> torch.Tensor:
        if path_embeddings.shape[0] == 0:
            return torch.zeros(self.dim)
        weights = torch.softmax(self.attention(path_embeddings), dim=0)
        weighted = (weights * path_embeddings).sum(dim=0)
        pooled = torch.cat(
            [weighted, path_embeddings.mean(dim=0), path_embeddings.max(dim=0).values]
        )
        return self.out(pooled)


class DualStreamModel(nn.Module):
    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        self.global_encoder = GlobalEncoder(config)
        self.path_encoder = PathEncoder(config)
        self.path_aggregator = PathAggregator(config)
        self.gate = nn.Linear(config.fused_input_dim, config.fused_dim)
        self.fusion_mlp = nn.Sequential(
            nn.Linear(config.fused_input_dim, config.fused_dim),
            nn.ReLU(),
            nn.Linear(config.fused_dim, config.fused_dim),
        )
        self.classifier = nn.Linear(config.fused_dim, config.num_classes)
        self.risk_head = nn.Linear(config.path_dim, config.risk_classes)

    def forward(self, graph: ContractGraph) -> dict:
        e_global = self.global_encoder(graph.x, graph.adj)
        path_embeddings = self.path_encoder(graph)
        e_path = self.path_aggregator(path_embeddings)
        concat = torch.cat([e_global, e_path])
        gate = torch.sigmoid(self.gate(concat))
        mlp = self.fusion_mlp(concat)
        fused = gate * mlp
        return {
            "e_global": e_global,
            "path_embeddings": path_embeddings,
            "e_path": e_path,
            "gate": gate,
            "mlp": mlp,
            "fused": fused,
            "logits": self.classifier(fused),
            "path_logits": self.risk_head(path_embeddings),
        }

    def score(self, graph: ContractGraph) -> tuple[float, list[int]]:
        """Vulnerability probability plus per-path risk class indices."""
        with torch.no_grad():
            out = self.forward(graph)
            probability = torch.softmax(out["logits"], dim=0)[1].item()
            risks = (
                out["path_logits"].argmax(dim=1).tolist()
                if graph.num_paths
                else []
            )
        return probability, risks
