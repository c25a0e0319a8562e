"""Source-to-sink path enumeration and numeric path features."""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import DEFAULT_CONFIG, AnalysisConfig
from .frontend import astnodes as ast
from .graph import ACCESS_NONE, ACCESS_OWNER, ACCESS_ROLE, SemanticGraph, propagation_edges
from .taint import SENSITIVITY_SCALE, SINK_RISK_SCALE, _is_hash_call

ACCESS_SCALE = {ACCESS_NONE: 1.0, ACCESS_ROLE: 0.5, ACCESS_OWNER: 0.0}

FEATURE_NAMES = (
    "norm_length",
    "sink_taint",
    "source_sensitivity",
    "sink_risk",
    "has_modulo",
    "has_keccak",
    "crosses_state_edge",
    "in_payable_context",
    "access_guard",
    "source_count",
)


@dataclass
class VulnPath:
    id: int
    node_seq: tuple[int, ...]
    source: int
    sink: int
    sink_taint: float
    features: list[float] = field(default_factory=list)
    risk: str | None = None  # assigned by the risk assessor


@dataclass
class PathExtractionResult:
    paths: list[VulnPath]
    truncated: bool


def enumerate_simple_paths(
    adjacency: dict[int, list[int]],
    sources: list[int],
    sinks: set[int],
    max_len: int,
    max_paths: int,
) -> tuple[list[tuple[int, ...]], bool]:
    """All simple source-to-sink paths, deterministic, capped.

    Returns paths sorted lexicographically by node sequence plus a flag
    that is set whenever either cap truncated the enumeration.
    """
    found: set[tuple[int, ...]] = set()
    truncated = False

    def dfs(path: list[int], on_path: set[int]):
        nonlocal truncated
        node = path[-1]
        if node in sinks:
            if len(found) >= max_paths:
                truncated = True
                return False
            found.add(tuple(path))
        if len(path) >= max_len:
            if any(n not in on_path for n in adjacency.get(node, ())):
                truncated = True
            return True
        for nxt in adjacency.get(node, ()):
            if nxt in on_path:
                continue
            path.append(nxt)
            on_path.add(nxt)
            ok = dfs(path, on_path)
            on_path.discard(nxt)
            path.pop()
            if not ok:
                return False
        return True

    for src in sorted(set(sources)):
        if not dfs([src], {src}):
            break
    return sorted(found), truncated


def extract_paths(
    graph: SemanticGraph, config: AnalysisConfig = DEFAULT_CONFIG
) -> PathExtractionResult:
    """Enumerate tainted simple paths from labeled sources to labeled sinks."""
    adjacency: dict[int, list[int]] = {}
    for src, dst, _ in propagation_edges(graph, config):
        lst = adjacency.setdefault(src, [])
        if dst not in lst:
            lst.append(dst)
    for lst in adjacency.values():
        lst.sort()
    sources = [n.id for n in graph.nodes if n.sources]
    sinks = {
        n.id
        for n in graph.nodes
        if n.sink is not None and n.taint > config.taint_threshold
    }
    sequences, truncated = enumerate_simple_paths(
        adjacency, sources, sinks, config.max_path_len, config.max_paths
    )
    paths = []
    for idx, seq in enumerate(sequences):
        path = VulnPath(
            id=idx,
            node_seq=seq,
            source=seq[0],
            sink=seq[-1],
            sink_taint=graph.nodes[seq[-1]].taint,
        )
        path.features = compute_path_features(path, graph, config)
        paths.append(path)
    return PathExtractionResult(paths, truncated)


def _has_modulo(node) -> bool:
    if node.stmt is None:
        return False
    return any(
        n.kind == ast.BINARY_OP and n.name == "%" for n in node.stmt.walk()
    )


def _has_keccak(node) -> bool:
    if node.stmt is None:
        return False
    return any(_is_hash_call(n) for n in node.stmt.walk())


def path_access_guard(path: VulnPath, graph: SemanticGraph) -> str:
    """Minimum-privilege guard among the contexts the path crosses."""
    rank = {ACCESS_NONE: 0, ACCESS_ROLE: 1, ACCESS_OWNER: 2}
    guards = [
        graph.contexts[graph.nodes[nid].context_id].access_guard
        for nid in path.node_seq
    ]
    return min(guards, key=lambda g: rank[g]) if guards else ACCESS_NONE


def compute_path_features(
    path: VulnPath, graph: SemanticGraph, config: AnalysisConfig = DEFAULT_CONFIG
) -> list[float]:
    """Fixed 10-entry numeric descriptor of one path."""
    nodes = [graph.nodes[nid] for nid in path.node_seq]
    source_node = graph.nodes[path.source]
    sink_node = graph.nodes[path.sink]
    sensitivity = max(
        (SENSITIVITY_SCALE[lbl.sensitivity] for lbl, _ in source_node.sources),
        default=0.0,
    )
    sink_risk = (
        SINK_RISK_SCALE[sink_node.sink[0].risk] if sink_node.sink else 0.0
    )
    state_pairs = {
        (e.src, e.dst) for e in graph.edges if e.kind == "State"
    }
    crosses_state = any(
        (a, b) in state_pairs
        for a, b in zip(path.node_seq, path.node_seq[1:])
    )
    payable = any(
        graph.contexts[n.context_id].payable for n in nodes
    )
    distinct_sources = {
        nid for nid in path.node_seq if graph.nodes[nid].sources
    }
    return [
        len(path.node_seq) / config.max_path_len,
        path.sink_taint,
        sensitivity,
        sink_risk,
        1.0 if any(_has_modulo(n) for n in nodes) else 0.0,
        1.0 if any(_has_keccak(n) for n in nodes) else 0.0,
        1.0 if crosses_state else 0.0,
        1.0 if payable else 0.0,
        ACCESS_SCALE[path_access_guard(path, graph)],
        min(len(distinct_sources) / 4.0, 1.0),
    ]
