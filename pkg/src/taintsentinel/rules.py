"""Context-sensitive path risk classification.

Six core rules can force a path HIGH or SAFE; everything else falls back
to a source-sensitivity x sink-risk matrix, with owner-guarded contexts
demoted one level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import DEFAULT_CONFIG, AnalysisConfig
from .frontend import astnodes as ast
from .frontend.astnodes import AstNode, SourceSpan
from .graph import ACCESS_OWNER, SemanticGraph
from .paths import VulnPath, _has_keccak, _has_modulo, path_access_guard
from .taint import find_source_patterns

HIGH = "HIGH"
MEDIUM = "MEDIUM"
LOW = "LOW"
SAFE = "SAFE"

RISK_RANK = {HIGH: 3, MEDIUM: 2, LOW: 1, SAFE: 0}
RANK_RISK = {v: k for k, v in RISK_RANK.items()}

FORCE_HIGH = "ForceHigh"
FORCE_SAFE = "ForceSafe"

TIMELOCK_UNITS = ("minutes", "hours", "seconds")
COOLDOWN_UNITS = ("days", "weeks")


@dataclass(frozen=True)
class RuleMatch:
    rule_id: str
    verdict: str  # ForceHigh | ForceSafe
    evidence_span: SourceSpan


@dataclass
class PathAssessment:
    path: VulnPath
    risk: str
    matched_rules: list[RuleMatch] = field(default_factory=list)
    context_tags: list[str] = field(default_factory=list)
    access: str = "None"


# ---------------------------------------------------------------------------
# context analysis


def analyze_context(
    path: VulnPath, graph: SemanticGraph, config: AnalysisConfig = DEFAULT_CONFIG
) -> list[str]:
    """Keyword/shape tags: gambling, timecheck, logging, rng, transfer-bearing."""
    tags = []
    nodes = [graph.nodes[nid] for nid in path.node_seq]
    haystack = graph.contract_name.lower()
    for node in nodes:
        haystack += " " + node.snippet.lower()
        haystack += " " + graph.contexts[node.context_id].name.lower()
    if any(kw in haystack for kw in config.gambling_keywords):
        tags.append("gambling")
    if any(_time_guard_comparisons(n.stmt) for n in nodes if n.stmt is not None):
        tags.append("timecheck")
    sink_node = graph.nodes[path.sink]
    if sink_node.sink is not None and sink_node.sink[0].category == "EventLog":
        tags.append("logging")
    if any(_has_keccak(n) or _has_modulo(n) for n in nodes) or (
        sink_node.sink is not None
        and sink_node.sink[0].category == "RandomGeneration"
    ):
        tags.append("rng")
    if sink_node.sink is not None and sink_node.sink[0].category in (
        "ValueTransfer",
        "PrizeAssignment",
    ):
        tags.append("transfer-bearing")
    return tags


def check_access_control(path: VulnPath, graph: SemanticGraph) -> str:
    """Weakest access guard among contexts on the path (None wins)."""
    return path_access_guard(path, graph)


# ---------------------------------------------------------------------------
# risk factors


def identify_risk_factors(path: VulnPath, graph: SemanticGraph) -> list[str]:
    factors = []
    nodes = [graph.nodes[nid] for nid in path.node_seq]
    source_node = graph.nodes[path.source]
    sink_node = graph.nodes[path.sink]
    if any(_has_modulo(n) for n in nodes):
        factors.append("modulo-on-source")
    if any(_has_keccak(n) for n in nodes):
        factors.append("keccak-of-source")
    payable = any(graph.contexts[n.context_id].payable for n in nodes)
    if payable or (
        sink_node.sink is not None
        and sink_node.sink[0].category in ("ValueTransfer", "PrizeAssignment")
    ):
        factors.append("value-at-stake")
    patterns = {lbl.pattern for n in nodes for lbl, _ in n.sources}
    if len(patterns) >= 2:
        factors.append("multi-source")
    if patterns & {"Blockhash", "BlockNumber", "BlockDifficulty"} and (
        source_node.context_id == sink_node.context_id
    ):
        factors.append("same-block-consumption")
    return factors


# ---------------------------------------------------------------------------
# rule machinery


def _direct_source_modulo(stmt: AstNode) -> AstNode | None:
    """A `%` whose left operand syntactically contains a timestamp read."""
    for n in stmt.walk():
        if n.kind == ast.BINARY_OP and n.name == "%":
            left = n.children[0]
            for pattern, _span in find_source_patterns(left):
                if pattern == "BlockTimestamp":
                    return n
    return None


def _time_guard_comparisons(stmt: AstNode) -> list[AstNode]:
    """Comparisons of the form `<source> >= <var> + <literal duration>`."""
    out = []
    for n in stmt.walk():
        if n.kind != ast.BINARY_OP or n.name not in (">", ">=", "<", "<="):
            continue
        left, right = n.children[:2]
        if n.name in ("<", "<="):
            left, right = right, left
        if not any(True for _ in find_source_patterns(left)):
            continue
        if _is_duration_offset(right):
            out.append(n)
    return out


def _is_duration_offset(expr: AstNode) -> bool:
    """`var + <literal with time unit>` or a bare identifier/deadline."""
    if expr.kind == ast.BINARY_OP and expr.name == "+":
        a, b = expr.children[:2]
        lit = b if b.kind == ast.LITERAL else a if a.kind == ast.LITERAL else None
        other = a if lit is b else b
        return (
            lit is not None
            and lit.attrs.get("unit", "") in TIMELOCK_UNITS + COOLDOWN_UNITS
            and other.kind == ast.IDENTIFIER
        )
    return False


def _guard_duration_units(stmt: AstNode) -> set[str]:
    units = set()
    for cmp_node in _time_guard_comparisons(stmt):
        right = cmp_node.children[1]
        if cmp_node.name in ("<", "<="):
            right = cmp_node.children[0]
        for n in right.walk():
            if n.kind == ast.LITERAL and n.attrs.get("unit"):
                units.add(n.attrs["unit"])
    return units


def _source_only_in_guards(path: VulnPath, graph: SemanticGraph) -> bool:
    """True when every source read on the path sits inside a time-guard
    comparison and never flows into the sink through data/state edges."""
    state_or_data = {
        (e.src, e.dst) for e in graph.edges if e.kind in ("Data", "State")
    }
    for nid in path.node_seq:
        node = graph.nodes[nid]
        if not node.sources or node.stmt is None:
            continue
        guards = _time_guard_comparisons(node.stmt)
        if not guards:
            return False
        guarded_spans = set()
        for g in guards:
            for _p, span in find_source_patterns(g):
                guarded_spans.add(span)
        for _lbl, span in node.sources:
            if span not in guarded_spans:
                return False
        if _has_modulo(node):
            return False
        # the guard value must not continue through data flow
        for a, b in zip(path.node_seq, path.node_seq[1:]):
            if a == nid and (a, b) in state_or_data:
                return False
    return True


def _evaluate_rules(
    path: VulnPath,
    graph: SemanticGraph,
    tags: list[str],
) -> list[RuleMatch]:
    matches = []
    nodes = [graph.nodes[nid] for nid in path.node_seq]
    source_node = graph.nodes[path.source]
    sink_node = graph.nodes[path.sink]
    source_patterns = {lbl.pattern for lbl, _ in source_node.sources}
    has_timestamp = "BlockTimestamp" in source_patterns

    # R1: block.timestamp % N
    for node in nodes:
        if node.stmt is None:
            continue
        mod = _direct_source_modulo(node.stmt)
        if mod is not None:
            matches.append(RuleMatch("ts-modulo", FORCE_HIGH, mod.span))
            break

    # R2: block.timestamp in a gambling context
    if has_timestamp and "gambling" in tags:
        matches.append(
            RuleMatch("ts-gambling", FORCE_HIGH, source_node.span)
        )

    # R3: keccak256(block.timestamp, ...) used for randomness
    if has_timestamp and any(_has_keccak(n) for n in nodes):
        rng_usage = any(_has_modulo(n) for n in nodes) or (
            sink_node.sink is not None
            and sink_node.sink[0].category == "RandomGeneration"
        )
        if rng_usage:
            keccak_node = next(n for n in nodes if _has_keccak(n))
            matches.append(
                RuleMatch("keccak-ts-rng", FORCE_HIGH, keccak_node.span)
            )

    # R4/R6: pure time-guard comparisons are safe
    if _source_only_in_guards(path, graph):
        units = set()
        for node in nodes:
            if node.stmt is not None:
                units |= _guard_duration_units(node.stmt)
        if units & set(COOLDOWN_UNITS):
            matches.append(
                RuleMatch("ts-cooldown-guard", FORCE_SAFE, source_node.span)
            )
        elif units:
            matches.append(
                RuleMatch("ts-timelock-guard", FORCE_SAFE, source_node.span)
            )

    # R5: sink is an event emission
    if sink_node.sink is not None and sink_node.sink[0].category == "EventLog":
        matches.append(
            RuleMatch("ts-event-logging", FORCE_SAFE, sink_node.span)
        )
    return matches


_MATRIX = {
    ("High", "High"): HIGH,
    ("High", "Medium"): MEDIUM,
    ("Medium", "High"): MEDIUM,
    ("High", "Low"): LOW,
    ("Medium", "Medium"): LOW,
    ("Medium", "Low"): LOW,
}


def apply_rules(
    path: VulnPath,
    tags: list[str],
    access: str,
    factors: list[str],
    graph: SemanticGraph,
) -> PathAssessment:
    """Verdict precedence: ForceHigh > ForceSafe > sensitivity/risk matrix."""
    matches = _evaluate_rules(path, graph, tags)
    if any(m.verdict == FORCE_HIGH for m in matches):
        risk = HIGH
    elif any(m.verdict == FORCE_SAFE for m in matches):
        risk = SAFE
    else:
        source_node = graph.nodes[path.source]
        sink_node = graph.nodes[path.sink]
        sensitivities = [lbl.sensitivity for lbl, _ in source_node.sources]
        sens = "High" if "High" in sensitivities else "Medium"
        sink_risk = sink_node.sink[0].risk if sink_node.sink else "Low"
        risk = _MATRIX.get((sens, sink_risk), LOW)
        if access == ACCESS_OWNER:
            risk = RANK_RISK[max(RISK_RANK[risk] - 1, 0)]
    path.risk = risk
    return PathAssessment(
        path=path,
        risk=risk,
        matched_rules=matches,
        context_tags=tags,
        access=access,
    )


def assess_path_risks(
    paths: list[VulnPath],
    graph: SemanticGraph,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> list[PathAssessment]:
    """Assess every path and sort by risk rank, sink taint, then id."""
    assessments = []
    for path in paths:
        tags = analyze_context(path, graph, config)
        access = check_access_control(path, graph)
        factors = identify_risk_factors(path, graph)
        assessments.append(apply_rules(path, tags, access, factors, graph))
    assessments.sort(
        key=lambda a: (-RISK_RANK[a.risk], -a.path.sink_taint, a.path.id)
    )
    return assessments
