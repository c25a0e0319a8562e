"""Entropy-source / sensitive-sink labeling and graduated taint propagation."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .config import DEFAULT_CONFIG, AnalysisConfig
from .frontend import astnodes as ast
from .frontend.astnodes import AstNode, SourceSpan
from .graph import SemanticGraph, propagation_edges

HIGH = "High"
MEDIUM = "Medium"
LOW = "Low"


@dataclass(frozen=True)
class SourceLabel:
    pattern: str  # BlockTimestamp | Blockhash | BlockDifficulty | BlockNumber
    #               | TxGasprice | GasLeft | MsgSenderEntropy | BalanceEntropy
    sensitivity: str  # High | Medium
    standard: str  # CWE tag


@dataclass(frozen=True)
class SinkLabel:
    category: str
    risk: str
    standard: str  # SWC tag


_SOURCE_TABLE = {
    "BlockTimestamp": (HIGH, "CWE-330"),
    "Blockhash": (HIGH, "CWE-330"),
    "BlockDifficulty": (HIGH, "CWE-330"),
    "BlockNumber": (MEDIUM, "CWE-330"),
    "TxGasprice": (MEDIUM, "CWE-330"),
    "GasLeft": (MEDIUM, "CWE-330"),
    "MsgSenderEntropy": (MEDIUM, "CWE-330"),
    "BalanceEntropy": (MEDIUM, "CWE-330"),
}

_SINK_TABLE = {
    "RandomGeneration": (HIGH, "SWC-120"),
    "ValueTransfer": (HIGH, "SWC-105"),
    "PrizeAssignment": (HIGH, "SWC-120"),
    "StateModification": (MEDIUM, "SWC-124"),
    "ExternalCall": (MEDIUM, "SWC-107"),
    "ConditionalLogic": (LOW, "SWC-116"),
    # extension: event emissions can terminate a path (timestamp logging)
    "EventLog": (LOW, "SWC-116"),
}

SENSITIVITY_SCALE = {HIGH: 1.0, MEDIUM: 0.5}
SINK_RISK_SCALE = {HIGH: 1.0, MEDIUM: 0.66, LOW: 0.33}

_PRIZE_NAME_HINTS = ("prize", "winner", "reward", "jackpot", "payout", "pot")

HASH_CALLEES = frozenset({"keccak256", "sha256", "encode", "encodePacked"})


def make_source_label(pattern: str) -> SourceLabel:
    sensitivity, standard = _SOURCE_TABLE[pattern]
    return SourceLabel(pattern, sensitivity, standard)


def make_sink_label(category: str) -> SinkLabel:
    risk, standard = _SINK_TABLE[category]
    return SinkLabel(category, risk, standard)


# ---------------------------------------------------------------------------
# source detection


def _is_member(expr: AstNode, base: str, member: str) -> bool:
    return (
        expr.kind == ast.MEMBER_ACCESS
        and expr.name == member
        and expr.children[0].kind == ast.IDENTIFIER
        and expr.children[0].name == base
    )


def _is_hash_call(expr: AstNode) -> bool:
    if expr.kind != ast.CALL or not expr.children:
        return False
    callee = expr.children[0]
    if callee.kind == ast.IDENTIFIER:
        return callee.name in ("keccak256", "sha256")
    if callee.kind == ast.MEMBER_ACCESS:
        return callee.name in ("encode", "encodePacked") and _is_ident(
            callee.children[0], "abi"
        )
    return False


def _is_ident(expr: AstNode, name: str) -> bool:
    return expr.kind == ast.IDENTIFIER and expr.name == name


def _is_self_balance(expr: AstNode) -> bool:
    # address(this).balance
    if expr.kind != ast.MEMBER_ACCESS or expr.name != "balance":
        return False
    obj = expr.children[0]
    return (
        obj.kind == ast.CALL
        and obj.children
        and _is_ident(obj.children[0], "address")
        and len(obj.children) == 2
        and _is_ident(obj.children[1], "this")
    )


def find_source_patterns(expr: AstNode, in_hash=False):
    """Yield (pattern, span) for every entropy-source read in `expr`."""
    if _is_member(expr, "block", "timestamp") or _is_ident(expr, "now"):
        yield ("BlockTimestamp", expr.span)
    elif _is_member(expr, "block", "difficulty") or _is_member(
        expr, "block", "prevrandao"
    ):
        yield ("BlockDifficulty", expr.span)
    elif _is_member(expr, "block", "number"):
        yield ("BlockNumber", expr.span)
    elif _is_member(expr, "tx", "gasprice"):
        yield ("TxGasprice", expr.span)
    elif expr.kind == ast.CALL and expr.children and _is_ident(
        expr.children[0], "blockhash"
    ):
        yield ("Blockhash", expr.span)
    elif expr.kind == ast.CALL and expr.children and _is_ident(
        expr.children[0], "gasleft"
    ):
        yield ("GasLeft", expr.span)
    elif in_hash and _is_member(expr, "msg", "sender"):
        yield ("MsgSenderEntropy", expr.span)
    elif in_hash and _is_self_balance(expr):
        yield ("BalanceEntropy", expr.span)
    nested_hash = in_hash or _is_hash_call(expr)
    for child in expr.children:
        yield from find_source_patterns(child, nested_hash)


# ---------------------------------------------------------------------------
# sink detection


def _contains_kind(stmt: AstNode, pred) -> bool:
    return any(pred(n) for n in stmt.walk())


def _classify_sink(node, graph: SemanticGraph) -> tuple[str, SourceSpan] | None:
    stmt = node.stmt
    if stmt is None:
        return None
    if node.kind == "transfer":
        return ("ValueTransfer", stmt.span)
    if node.kind == "assign" and node.writes:
        target = next(iter(node.writes))
        # only writes to contract storage count as sinks
        if target in graph.state_vars:
            lowered = target.lower()
            if any(h in lowered for h in _PRIZE_NAME_HINTS):
                return ("PrizeAssignment", stmt.span)
            return ("StateModification", stmt.span)
        return None
    if node.kind == "return" and stmt.children:
        expr = stmt.children[0]
        if _contains_kind(expr, _is_hash_call) or _contains_kind(
            expr, lambda n: n.kind == ast.BINARY_OP and n.name == "%"
        ):
            return ("RandomGeneration", stmt.span)
        return None
    if node.kind == "emit":
        return ("EventLog", stmt.span)
    if node.kind == "call":
        callee = stmt.children[0] if stmt.children else None
        if (
            callee is not None
            and callee.kind == ast.MEMBER_ACCESS
            and callee.children[0].kind == ast.IDENTIFIER
            and callee.children[0].name not in ("abi", "block", "msg", "tx")
        ):
            return ("ExternalCall", stmt.span)
    return None


def identify_sources_sinks(graph: SemanticGraph) -> SemanticGraph:
    """Annotate graph nodes with Table-2 source and sink labels, in place."""
    for node in graph.nodes:
        node.sources = []
        node.sink = None
        if node.stmt is None:
            continue
        seen = set()
        for expr in _node_exprs(node):
            for pattern, span in find_source_patterns(expr):
                key = (pattern, span)
                if key not in seen:
                    seen.add(key)
                    node.sources.append((make_source_label(pattern), span))
        sink = _classify_sink(node, graph)
        if sink is not None:
            node.sink = (make_sink_label(sink[0]), sink[1])
    # conditionals whose body holds no other sink are themselves Low sinks
    for node in graph.nodes:
        if node.kind in ("if", "while") and node.sink is None:
            if not any(
                graph.nodes[i].sink is not None for i in node.body_ids
            ):
                node.sink = (make_sink_label("ConditionalLogic"), node.span)
    return graph


def _node_exprs(node):
    from .graph import _stmt_exprs

    return _stmt_exprs(node.stmt)


# ---------------------------------------------------------------------------
# graduated propagation


def graduated_propagate(
    incoming: float, edge_kind: str, config: AnalysisConfig = DEFAULT_CONFIG
) -> float:
    """Attenuate a taint level across one edge of the given kind."""
    if not 0.0 <= incoming <= 1.0:
        raise ValueError(f"taint level {incoming} outside [0, 1]")
    return incoming * config.edge_factor(edge_kind)


def max_product_fixpoint(
    num_nodes: int,
    weighted_edges: list[tuple[int, int, float]],
    sources: list[int],
    tau: float,
    order: list[int] | None = None,
) -> list[float]:
    """Worklist fixpoint of max-over-paths edge-factor products.

    Re-enqueues on strict improvement, so the result is independent of
    worklist order. Values strictly below `tau` are clamped to zero at
    the end; sources are pinned at 1.0.
    """
    taint = [0.0] * num_nodes
    adjacency: dict[int, list[tuple[int, float]]] = {}
    for src, dst, factor in weighted_edges:
        adjacency.setdefault(src, []).append((dst, factor))
    source_set = set(sources)
    queue = deque(order if order is not None else sorted(sources))
    for src in sources:
        taint[src] = 1.0
    in_queue = set(queue)
    while queue:
        node = queue.popleft()
        in_queue.discard(node)
        for dst, factor in adjacency.get(node, ()):
            candidate = taint[node] * factor
            if candidate > taint[dst] and dst not in source_set:
                taint[dst] = candidate
                if dst not in in_queue:
                    queue.append(dst)
                    in_queue.add(dst)
    return [t if t >= tau else 0.0 for t in taint]


def propagate_taint(
    graph: SemanticGraph, config: AnalysisConfig = DEFAULT_CONFIG
) -> SemanticGraph:
    """Run graduated taint propagation to a fixpoint, annotating node.taint."""
    sources = [n.id for n in graph.nodes if n.sources]
    edges = propagation_edges(graph, config)
    levels = max_product_fixpoint(
        len(graph.nodes), edges, sources, config.taint_threshold
    )
    for node, level in zip(graph.nodes, levels):
        node.taint = level
    return graph
