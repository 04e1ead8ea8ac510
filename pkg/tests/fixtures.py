"""Shared fixture graphs and brute-force oracles used across the test suite.

The oracles enumerate exhaustively and never call the code paths they
check.
"""

from __future__ import annotations

import itertools
import math

from frugal.core import UndirectedGraph
from frugal.flows import DiGraph


def diamond() -> DiGraph:
    # s=0, a=1, b=2, t=3; edges: 0: s->a, 1: s->b, 2: a->t, 3: b->t
    return DiGraph(4, ((0, 1), (0, 2), (1, 3), (2, 3)), 0, 3)


DIAMOND_COSTS = [1.0, 2.0, 3.0, 4.0]


def para(n: int) -> DiGraph:
    """Two parallel s-t paths: one direct edge, one with n edges."""
    verts = 2 + (n - 1)
    edges = [(0, verts - 1)]
    prev = 0
    for i in range(n - 1):
        edges.append((prev, 1 + i))
        prev = 1 + i
    edges.append((prev, verts - 1))
    return DiGraph(verts, tuple(edges), 0, verts - 1)


def para_costs(n: int) -> list[float]:
    return [1.0] + [0.0] * n


def parallel_edges(count: int) -> DiGraph:
    return DiGraph(2, tuple((0, 1) for _ in range(count)), 0, 1)


def two_diamonds_in_series() -> DiGraph:
    # s=0 .. v=3 (shared middle) .. t=6; two diamonds glued at v.
    edges = (
        (0, 1), (0, 2), (1, 3), (2, 3),   # first diamond
        (3, 4), (3, 5), (4, 6), (5, 6),   # second diamond
    )
    return DiGraph(7, edges, 0, 6)


def star_graph(m: int) -> UndirectedGraph:
    return UndirectedGraph(m + 1, tuple((0, i) for i in range(1, m + 1)))


def triangle() -> UndirectedGraph:
    return UndirectedGraph(3, ((0, 1), (0, 2), (1, 2)))


# ---------------------------------------------------------------------------
# Brute-force oracles


def brute_all_simple_paths(g: DiGraph, allowed=None, src=None, dst=None) -> list[tuple[int, ...]]:
    allowed = set(range(g.n_edges)) if allowed is None else set(allowed)
    src = g.s if src is None else src
    dst = g.t if dst is None else dst
    out = [[] for _ in range(g.n_vertices)]
    for eid in allowed:
        out[g.edges[eid][0]].append(eid)
    paths = []

    def rec(v, used_vs, acc):
        if v == dst:
            paths.append(tuple(acc))
            return
        for eid in out[v]:
            h = g.edges[eid][1]
            if h in used_vs:
                continue
            rec(h, used_vs | {h}, acc + [eid])

    rec(src, {src}, [])
    return paths


def brute_k_flows(g: DiGraph, k: int, allowed=None) -> list[frozenset[int]]:
    """All unions of k pairwise edge-disjoint s-t paths, deduplicated."""
    paths = [frozenset(p) for p in brute_all_simple_paths(g, allowed)]
    unions = set()

    def rec(start, chosen, depth):
        if depth == k:
            unions.add(chosen)
            return
        for i in range(start, len(paths)):
            if not (chosen & paths[i]):
                rec(i + 1, chosen | paths[i], depth + 1)

    rec(0, frozenset(), 0)
    return sorted(unions, key=sorted)


def brute_min_cost_flow_cost(g: DiGraph, costs, k: int, allowed=None) -> float:
    """Minimum total cost over all integral k-flows, by exhaustive enumeration."""
    best = math.inf
    for union in brute_k_flows(g, k, allowed):
        c = sum(costs[e] for e in union)
        best = min(best, c)
    return best


def brute_max_flow(g: DiGraph, allowed=None) -> int:
    k = 0
    while brute_k_flows(g, k + 1, allowed):
        k += 1
    return k


def brute_longest_path(g: DiGraph, edge_ids, costs, src=None, dst=None) -> float:
    """Longest simple path within an edge subset between two endpoints."""
    best = -math.inf
    for p in brute_all_simple_paths(g, edge_ids, src, dst):
        best = max(best, sum(costs[e] for e in p))
    return best


def brute_delta(g: DiGraph, costs, k: int) -> float:
    """Reference minimum longest path over (k+1)-flows (cycle-free test graphs only)."""
    best = math.inf
    for union in brute_k_flows(g, k + 1):
        best = min(best, brute_longest_path(g, union, costs))
    return best


def brute_minimal_sets(universe: int, feasible_fn) -> list[frozenset[int]]:
    """Inclusion-minimal feasible sets by scanning all 2^universe subsets."""
    feas = [frozenset(s)
            for r in range(universe + 1)
            for s in itertools.combinations(range(universe), r)
            if feasible_fn(frozenset(s))]
    return sorted((s for s in feas if not any(o < s for o in feas)), key=sorted)
