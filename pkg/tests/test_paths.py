import random
from collections import defaultdict

import pytest

from oracles import brute_force_simple_paths, random_weighted_graph
from taintsentinel.config import DEFAULT_CONFIG, AnalysisConfig
from taintsentinel.frontend import astnodes as ast
from taintsentinel.frontend.parser import parse_source
from taintsentinel.graph import build_semantic_graph
from taintsentinel.paths import (
    FEATURE_NAMES,
    enumerate_simple_paths,
    extract_paths,
)
from taintsentinel.taint import identify_sources_sinks, propagate_taint


def analyzed_graph(source):
    root = parse_source(source)
    contract = root if root.kind == ast.CONTRACT else root.children[0]
    g = build_semantic_graph(contract)
    identify_sources_sinks(g)
    propagate_taint(g)
    return g


def test_lottery_single_path(lottery_source):
    g = analyzed_graph(lottery_source)
    result = extract_paths(g)
    assert not result.truncated
    assert len(result.paths) == 1
    (path,) = result.paths
    assert path.node_seq == (1, 2, 3, 4)
    assert path.source == 1 and path.sink == 4
    assert path.sink_taint == pytest.approx(0.85)


def test_lottery_path_features(lottery_source):
    g = analyzed_graph(lottery_source)
    (path,) = extract_paths(g).paths
    features = dict(zip(FEATURE_NAMES, path.features))
    assert features["norm_length"] == pytest.approx(4 / 24)
    assert features["sink_taint"] == pytest.approx(0.85)
    assert features["source_sensitivity"] == 1.0
    assert features["sink_risk"] == 1.0
    assert features["has_modulo"] == 1.0
    assert features["has_keccak"] == 1.0
    assert features["crosses_state_edge"] == 0.0
    assert features["in_payable_context"] == 1.0
    assert features["access_guard"] == 1.0
    assert features["source_count"] == pytest.approx(1 / 4)


def test_features_are_bounded(lottery_source):
    g = analyzed_graph(lottery_source)
    for path in extract_paths(g).paths:
        assert len(path.features) == len(FEATURE_NAMES)
        assert all(0.0 <= v <= 1.0 for v in path.features)


def test_enumeration_matches_brute_force():
    rng = random.Random(99)
    for _ in range(200):
        n, edges, sources = random_weighted_graph(rng)
        adjacency = defaultdict(list)
        for s, d, _f in edges:
            adjacency[s].append(d)
        for lst in adjacency.values():
            lst.sort()
        sinks = set(rng.sample(range(n), rng.randint(1, n)))
        expected = brute_force_simple_paths(adjacency, sources, sinks, n)
        got, truncated = enumerate_simple_paths(
            adjacency, sources, sinks, max_len=n, max_paths=10**9
        )
        assert not truncated
        assert set(got) == expected
        assert got == sorted(got)


def test_truncation_flag_on_path_cap():
    adjacency = {0: [1, 2], 1: [3], 2: [3]}
    paths, truncated = enumerate_simple_paths(adjacency, [0], {3}, 24, 1)
    assert truncated and len(paths) == 1


def test_truncation_flag_on_length_cap():
    adjacency = {i: [i + 1] for i in range(5)}
    paths, truncated = enumerate_simple_paths(adjacency, [0], {5}, 3, 256)
    assert truncated and paths == []


def test_untainted_sinks_are_not_path_endpoints():
    # the transfer is unreachable from the timestamp read, so no path
    g = analyzed_graph(
        """
        contract A {
            uint256 public stamp;
            function f() public { stamp = block.timestamp; }
            function g(uint256 v) public { require(v > 1); }
        }
        """
    )
    result = extract_paths(g)
    assert [p.node_seq for p in result.paths] == [(0,)]


def test_singleton_source_sink_path():
    g = analyzed_graph(
        """
        contract A {
            event Ping(uint256 at);
            function f() public { emit Ping(block.timestamp); }
        }
        """
    )
    result = extract_paths(g)
    assert [p.node_seq for p in result.paths] == [(0,)]
    (path,) = result.paths
    assert path.sink_taint == 1.0


def test_max_paths_config_respected(lottery_source):
    g = analyzed_graph(lottery_source)
    config = AnalysisConfig(max_paths=0)
    result = extract_paths(g, config)
    assert result.paths == [] and result.truncated
