"""Dependency graph construction and its structure lemmas."""

import itertools
import random

import pytest

from frugal.core import (
    KPathSystem,
    ROutOfKSystem,
    VertexCoverSystem,
    is_feasible,
    minimal_feasible_sets,
    restrict,
)
from frugal.dependency import (
    build_dependency,
    build_dependency_kpath,
    components,
)
from frugal.errors import MonopolyError
from frugal.flows import (
    DiGraph,
    articulation_decomposition,
    cheapest_kplus1_subgraph,
    min_cost_flow,
)

from fixtures import (
    DIAMOND_COSTS,
    brute_all_simple_paths,
    brute_max_flow,
    diamond,
    para,
    para_costs,
    star_graph,
    two_diamonds_in_series,
)


def random_digraph(rng, n_vertices, n_edges):
    edges = []
    for _ in range(n_edges):
        u = rng.randrange(n_vertices)
        v = rng.randrange(n_vertices)
        while v == u:
            v = rng.randrange(n_vertices)
        edges.append((u, v))
    return DiGraph(n_vertices, tuple(edges), 0, n_vertices - 1)


def test_diamond_dependency_is_four_cycle():
    g = diamond()
    gstar = min_cost_flow(g, DIAMOND_COSTS, 2)
    h = build_dependency_kpath(g, gstar, 1)
    assert h.adjacent(0, 1) and h.adjacent(0, 3)
    assert not h.adjacent(0, 2) and not h.adjacent(1, 3)
    assert h.adjacent(2, 1) and h.adjacent(2, 3)
    assert len(h.edges) == 4


def test_para_dependency_is_star():
    g = para(4)
    gstar = cheapest_kplus1_subgraph(g, para_costs(4), 1)
    h = build_dependency_kpath(g, gstar, 1)
    # The single direct edge is joined to every edge of the long path.
    direct = 0
    for e in range(1, 5):
        assert h.adjacent(direct, e)
    for a, b in itertools.combinations(range(1, 5), 2):
        assert not h.adjacent(a, b)


def test_vertex_cover_dependency_is_input_graph():
    g = star_graph(3)
    h = build_dependency(VertexCoverSystem(g))
    assert h.nodes == (0, 1, 2, 3)
    assert h.edges == frozenset(g.edges)


def test_r_out_of_k_dependency_is_multipartite():
    system = ROutOfKSystem(((0,), (1, 2), (3, 4, 5)), 2)
    restricted = restrict(system, {0, 1, 2, 3, 4, 5})
    h = build_dependency(restricted)
    groups = [(0,), (1, 2), (3, 4, 5)]
    for ga, gb in itertools.combinations(groups, 2):
        for a in ga:
            for b in gb:
                assert h.adjacent(a, b)
    for grp in groups:
        for a, b in itertools.combinations(grp, 2):
            assert not h.adjacent(a, b)


def test_generic_matches_kpath_fast_path():
    rng = random.Random(31)
    checked = 0
    while checked < 20:
        g = random_digraph(rng, rng.randint(3, 5), rng.randint(3, 9))
        mf = brute_max_flow(g)
        if mf < 2:
            continue
        k = rng.randint(1, mf - 1)
        costs = [float(rng.randint(0, 9)) for _ in range(g.n_edges)]
        gstar = cheapest_kplus1_subgraph(g, costs, k)
        fast = build_dependency_kpath(g, gstar, k)
        generic = build_dependency(restrict(KPathSystem(g, k), gstar.edge_ids))
        assert fast.nodes == generic.nodes
        assert fast.edges == generic.edges
        checked += 1


def test_components_examples():
    g = diamond()
    gstar = min_cost_flow(g, DIAMOND_COSTS, 2)
    h = build_dependency_kpath(g, gstar, 1)
    assert len(components(h)) == 1

    g2 = two_diamonds_in_series()
    gstar2 = min_cost_flow(g2, [1.0] * 8, 2)
    h2 = build_dependency_kpath(g2, gstar2, 1)
    comps = components(h2)
    assert comps == [frozenset({0, 1, 2, 3}), frozenset({4, 5, 6, 7})]

    from frugal.dependency import DependencyGraph

    edgeless = DependencyGraph((0, 1, 2), frozenset())
    assert components(edgeless) == [frozenset({0}), frozenset({1}), frozenset({2})]


def test_monopoly_error():
    with pytest.raises(MonopolyError):
        build_dependency(restrict(KPathSystem(diamond(), 2), {0, 1, 2, 3}))


def test_feasible_sets_cover_dependency_edges():
    # Every minimal feasible set of the restricted system covers every edge of H.
    rng = random.Random(37)
    checked = 0
    while checked < 15:
        g = random_digraph(rng, rng.randint(3, 5), rng.randint(3, 9))
        mf = brute_max_flow(g)
        if mf < 2:
            continue
        k = rng.randint(1, mf - 1)
        costs = [float(rng.randint(0, 9)) for _ in range(g.n_edges)]
        gstar = cheapest_kplus1_subgraph(g, costs, k)
        restricted = restrict(KPathSystem(g, k), gstar.edge_ids)
        h = build_dependency(restricted)
        for m in minimal_feasible_sets(restricted):
            for a, b in h.edges:
                assert a in m or b in m
        checked += 1


def test_connectivity_iff_no_articulation():
    # Component count of H equals the part count of the articulation split.
    rng = random.Random(41)
    examples = 0
    while examples < 25:
        g = random_digraph(rng, rng.randint(3, 6), rng.randint(3, 10))
        mf = brute_max_flow(g)
        if mf < 2:
            continue
        k = rng.randint(1, mf - 1)
        costs = [float(rng.randint(0, 9)) for _ in range(g.n_edges)]
        gstar = cheapest_kplus1_subgraph(g, costs, k)
        h = build_dependency_kpath(g, gstar, k)
        dec = articulation_decomposition(g, gstar)
        assert len(components(h)) == len(dec.parts)
        examples += 1


def test_claim_interval_property():
    # Neighbours of any node along any s-t path of G* form one contiguous run.
    rng = random.Random(43)
    examples = 0
    while examples < 20:
        g = random_digraph(rng, rng.randint(3, 6), rng.randint(3, 10))
        mf = brute_max_flow(g)
        if mf < 2:
            continue
        k = rng.randint(1, mf - 1)
        costs = [float(rng.randint(0, 9)) for _ in range(g.n_edges)]
        gstar = cheapest_kplus1_subgraph(g, costs, k)
        h = build_dependency_kpath(g, gstar, k)
        for path in brute_all_simple_paths(g, gstar.edge_ids):
            for v in gstar.edge_ids - set(path):
                flags = [h.adjacent(v, e) for e in path]
                run = "".join("1" if f else "0" for f in flags).strip("0")
                assert "0" not in run
        examples += 1


def test_dependency_adjacency_symmetric_irreflexive():
    g = diamond()
    gstar = min_cost_flow(g, DIAMOND_COSTS, 2)
    h = build_dependency_kpath(g, gstar, 1)
    for a, b in h.edges:
        assert a < b
        assert h.adjacent(a, b) and h.adjacent(b, a)
        assert not h.adjacent(a, a)
