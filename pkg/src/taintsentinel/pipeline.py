"""End-to-end Phase-1 orchestration: parse -> graph -> taint -> paths -> rules."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .config import DEFAULT_CONFIG, AnalysisConfig
from .frontend import astnodes as ast
from .frontend.parser import parse_source
from .graph import SemanticGraph, build_semantic_graph
from .paths import extract_paths
from .rules import HIGH, MEDIUM, SAFE, PathAssessment, assess_path_risks, identify_risk_factors
from .taint import identify_sources_sinks, propagate_taint

VULNERABLE = "Vulnerable"
SUSPICIOUS = "Suspicious"
SAFE_VERDICT = "Safe"


@dataclass
class ContractAnalysis:
    graph: SemanticGraph
    assessments: list[PathAssessment]
    truncated: bool


@dataclass
class AnalysisReport:
    contract_id: str
    verdict: str
    assessments: list[PathAssessment]
    timing_ms: float
    truncated: bool
    graph: SemanticGraph = None

    def to_json(self):
        return {
            "schema_version": "1",
            "contract_id": self.contract_id,
            "verdict": self.verdict,
            "timing_ms": round(self.timing_ms, 3),
            "truncated": self.truncated,
            "assessments": [
                _assessment_json(a, self.graph) for a in self.assessments
            ],
        }


def _assessment_json(a: PathAssessment, graph: SemanticGraph):
    source_node = graph.nodes[a.path.source]
    sink_node = graph.nodes[a.path.sink]
    source_span = (
        source_node.sources[0][1] if source_node.sources else source_node.span
    )
    sink_span = sink_node.sink[1] if sink_node.sink else sink_node.span
    return {
        "path_id": a.path.id,
        "risk": a.risk,
        "nodes": list(a.path.node_seq),
        "sink_taint": a.path.sink_taint,
        "features": list(a.path.features),
        "source": {
            "node": a.path.source,
            "pattern": source_node.sources[0][0].pattern
            if source_node.sources
            else None,
            "span": source_span.to_json(),
            "snippet": source_node.snippet,
        },
        "sink": {
            "node": a.path.sink,
            "category": sink_node.sink[0].category if sink_node.sink else None,
            "standard": sink_node.sink[0].standard if sink_node.sink else None,
            "span": sink_span.to_json(),
            "snippet": sink_node.snippet,
        },
        "matched_rules": [
            {
                "rule_id": m.rule_id,
                "verdict": m.verdict,
                "evidence_span": m.evidence_span.to_json(),
            }
            for m in a.matched_rules
        ],
        "context_tags": list(a.context_tags),
        "risk_factors": identify_risk_factors(a.path, graph),
        "access": a.access,
    }


def analyze_contract(
    contract_ast, config: AnalysisConfig = DEFAULT_CONFIG
) -> ContractAnalysis:
    graph = build_semantic_graph(contract_ast)
    identify_sources_sinks(graph)
    propagate_taint(graph, config)
    result = extract_paths(graph, config)
    assessments = assess_path_risks(result.paths, graph, config)
    return ContractAnalysis(graph, assessments, result.truncated)


def verdict_for(assessments: list[PathAssessment]) -> str:
    risks = {a.risk for a in assessments}
    if HIGH in risks:
        return VULNERABLE
    if MEDIUM in risks:
        return SUSPICIOUS
    return SAFE_VERDICT


def run_pipeline(
    source: str, file: str = "<memory>", config: AnalysisConfig = DEFAULT_CONFIG
) -> list[AnalysisReport]:
    """Analyze every contract in a source file; one report per contract."""
    root = parse_source(source, file)
    contracts = [root] if root.kind == ast.CONTRACT else list(root.children)
    reports = []
    for contract in contracts:
        start = time.perf_counter()
        analysis = analyze_contract(contract, config)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        reports.append(
            AnalysisReport(
                contract_id=contract.name,
                verdict=verdict_for(analysis.assessments),
                assessments=analysis.assessments,
                timing_ms=elapsed_ms,
                truncated=analysis.truncated,
                graph=analysis.graph,
            )
        )
    return reports
