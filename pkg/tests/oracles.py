"""Shared test oracles: brute-force references and fixture paths."""

import random
from collections import defaultdict
from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"

LOTTERY_PATH = FIXTURES / "vulnerable_lottery.sol"

def random_weighted_graph(rng: random.Random, max_nodes=12):
    """A small random digraph with edge factors drawn from the decay set."""
    n = rng.randint(2, max_nodes)
    edge_count = rng.randint(1, min(18, n * (n - 1)))
    edges = {}
    for _ in range(edge_count):
        src, dst = rng.randrange(n), rng.randrange(n)
        if src != dst:
            edges[(src, dst)] = rng.choice((1.0, 0.85, 0.70))
    weighted = [(s, d, f) for (s, d), f in sorted(edges.items())]
    sources = sorted(rng.sample(range(n), rng.randint(1, max(1, n // 3))))
    return n, weighted, sources


def brute_force_taint(n, weighted_edges, sources, tau):
    """Max-over-simple-paths product of edge factors, sources pinned at 1."""
    adjacency = defaultdict(list)
    for src, dst, factor in weighted_edges:
        adjacency[src].append((dst, factor))
    source_set = set(sources)
    best = [0.0] * n
    for s in sources:
        best[s] = 1.0

    def dfs(node, product, visited):
        for dst, factor in adjacency[node]:
            if dst in visited:
                continue
            p = product * factor
            if dst not in source_set and p > best[dst]:
                best[dst] = p
            dfs(dst, p, visited | {dst})

    for s in sources:
        dfs(s, 1.0, {s})
    return [t if t >= tau else 0.0 for t in best]


def brute_force_simple_paths(adjacency, sources, sinks, max_len):
    """Exhaustive simple source-to-sink path enumeration."""
    found = set()

    def dfs(path, on_path):
        node = path[-1]
        if node in sinks:
            found.add(tuple(path))
        if len(path) >= max_len:
            return
        for nxt in adjacency.get(node, ()):
            if nxt not in on_path:
                path.append(nxt)
                dfs(path, on_path | {nxt})
                path.pop()

    for src in set(sources):
        dfs([src], {src})
    return found


def trapezoid_auc(scores, labels):
    """ROC area via trapezoidal integration with tie grouping."""
    pos = sum(labels)
    neg = len(labels) - pos
    by_score = defaultdict(lambda: [0, 0])
    for s, l in zip(scores, labels):
        by_score[s][0 if l else 1] += 1
    tp = fp = 0
    area = 0.0
    for s in sorted(by_score, reverse=True):
        dtp, dfp = by_score[s]
        area += dfp * (tp + dtp / 2.0)
        tp += dtp
        fp += dfp
    return area / (pos * neg)
