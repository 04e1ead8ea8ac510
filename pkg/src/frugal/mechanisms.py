"""Truthful set-system auctions built from pruning, lifting and threshold payments.

The engine prunes agents with a monotone bid-independent rule, scales the
survivors' bids by the Perron weights of their dependency graph, picks
the feasible set with the smallest scaled total, and pays each winner
min(t1, t2): t1 is the highest bid that still survives pruning, t2 the
highest bid that still wins selection with the pruned set and weights
held fixed.  Infinite thresholds are represented by math.inf, never by a
large float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from . import core, dependency, flows, spectral
from .errors import (
    InfeasibleFlowError,
    MonopolyError,
    MonotonicityError,
    SizeCapError,
    StructureError,
    ValidationError,
)

PAY_TOL = 1e-9
EXACT_COVER_CAP = 30


@dataclass(frozen=True)
class MechanismOutcome:
    """Winners, per-winner thresholds and payments of one mechanism run."""

    pruned: frozenset[int]
    lift: Optional[spectral.SpectralLift]
    winners: frozenset[int]
    t1: dict[int, float]
    t2: dict[int, float]
    payments: dict[int, float]
    total_payment: float


def _check_bids(bids: Sequence[float], n: int):
    if len(bids) != n:
        raise ValidationError("bid vector length does not match the agent count")
    for e, b in enumerate(bids):
        if b < 0 or not math.isfinite(b):
            raise ValidationError(f"agent {e} has an invalid bid {b}")


def _finalize(pruned, lifted, winners, t1, t2, bids) -> MechanismOutcome:
    payments = {}
    for e in t2:
        payments[e] = min(t1.get(e, math.inf), t2[e])
        if payments[e] < bids[e] - PAY_TOL:
            raise StructureError(
                f"payment {payments[e]} below bid {bids[e]} for winner {e}")
    return MechanismOutcome(
        frozenset(pruned), lifted, frozenset(winners), dict(t1), dict(t2),
        payments, float(sum(payments.values())))


def threshold_bid(win_predicate: Callable[[float], bool], upper: float,
                  tol: float = 1e-9, probes: int = 32) -> float:
    """Supremum of winning bids in [0, upper] for a monotone predicate.

    Samples `probes` points first and rejects predicates that win after
    losing; returns `upper` itself when the agent wins everywhere.
    """
    if upper <= 0:
        raise ValidationError("upper bound for the threshold search must be positive")
    xs = [upper * i / (probes - 1) for i in range(probes)]
    vals = [bool(win_predicate(x)) for x in xs]
    for earlier, later in zip(vals, vals[1:]):
        if later and not earlier:
            raise MonotonicityError("win predicate is not monotone on the probe grid")
    if vals[-1]:
        return upper
    if not vals[0]:
        return 0.0
    hi_idx = max(i for i, v in enumerate(vals) if v)
    lo, hi = xs[hi_idx], xs[hi_idx + 1]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if win_predicate(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _threshold_or_inf(win_predicate, upper, tol=1e-9) -> float:
    value = threshold_bid(win_predicate, upper, tol)
    return math.inf if value == upper else value


# ---------------------------------------------------------------------------
# Generic engine


def argmin_selector(restricted: core.ExplicitSystem, scaled: dict[int, float]) -> frozenset[int]:
    """Feasible generating set with the smallest scaled total; ties go lexicographic."""
    best = None
    for cand in restricted.feasible:
        cost = sum(scaled[e] for e in cand)
        key = tuple(sorted(cand))
        if best is None or (cost < best[0] - 1e-12
                            or (abs(cost - best[0]) <= 1e-12 and key < best[1])):
            best = (cost, key)
    if best is None:
        raise MonopolyError("restricted system has no feasible set")
    return frozenset(best[1])


def kpath_pruner(g: flows.DiGraph, k: int) -> Callable[[Sequence[float]], frozenset[int]]:
    def prune(bids: Sequence[float]) -> frozenset[int]:
        return flows.cheapest_kplus1_subgraph(g, bids, k).edge_ids

    return prune


def run_pruning_lifting(instance: core.SetSystemInstance, bids: Sequence[float],
                        pruner: Callable[[Sequence[float]], frozenset[int]],
                        selector: Callable[[core.ExplicitSystem, dict[int, float]], frozenset[int]],
                        payment_agents: Optional[Iterable[int]] = None) -> MechanismOutcome:
    """Run the full scheme with caller-supplied pruning and selection rules.

    Thresholds are found by bisection against the two stages, so any
    monotone bid-independent pruner works.  `payment_agents` limits the
    threshold computation (the totals then cover only those agents).
    """
    n = core.n_agents(instance)
    _check_bids(bids, n)
    surviving = frozenset(pruner(bids))
    restricted = core.restrict(instance, surviving)
    h = dependency.build_dependency(restricted)
    lifted = spectral.lift(h)
    scaled = {e: bids[e] / lifted.weights[e] for e in surviving}
    winners = frozenset(selector(restricted, scaled))
    if not core.is_feasible(instance, winners) or not winners <= surviving:
        raise StructureError("selector returned a non-feasible winner set")

    targets = winners if payment_agents is None else winners & frozenset(payment_agents)
    upper_prune = 1.0 + 2.0 * float(sum(bids))
    t1 = {}
    t2 = {}
    for e in sorted(targets):
        def survives(beta: float, e=e) -> bool:
            trial = list(bids)
            trial[e] = beta
            return e in pruner(trial)

        t1[e] = _threshold_or_inf(survives, upper_prune)

        w_e = lifted.weights[e]
        upper_select = w_e * (1.0 + sum(scaled[o] for o in surviving if o != e))

        def selected(beta: float, e=e, w_e=w_e) -> bool:
            trial = dict(scaled)
            trial[e] = beta / w_e
            return e in selector(restricted, trial)

        t2[e] = _threshold_or_inf(selected, max(upper_select, bids[e] + 1.0))
    return _finalize(surviving, lifted, winners, t1, t2, bids)


# ---------------------------------------------------------------------------
# k-path instantiation


def _kpath_state(g: flows.DiGraph, bids: Sequence[float], k: int):
    gstar = flows.cheapest_kplus1_subgraph(g, bids, k)
    h = dependency.build_dependency_kpath(g, gstar, k)
    lifted = spectral.lift(h)
    scaled = [0.0] * g.n_edges
    for e in gstar.edge_ids:
        scaled[e] = bids[e] / lifted.weights[e]
    winner_flow = flows.min_cost_flow(g, scaled, k, allowed=gstar.edge_ids)
    return gstar, lifted, scaled, winner_flow


def kpath_mechanism(g: flows.DiGraph, bids: Sequence[float], k: int,
                    payment_agents: Optional[Iterable[int]] = None) -> MechanismOutcome:
    """Prune to the cheapest (k+1)-flow, lift, and buy the cheapest scaled k-flow."""
    _check_bids(bids, g.n_edges)
    gstar, lifted, scaled, winner_flow = _kpath_state(g, bids, k)
    winners = winner_flow.edge_ids
    targets = winners if payment_agents is None else winners & frozenset(payment_agents)
    all_edges = frozenset(range(g.n_edges))
    t1 = {}
    t2 = {}
    for e in sorted(targets):
        t1[e], t2[e] = _kpath_thresholds(
            g, bids, k, e, gstar, lifted, scaled, winner_flow, all_edges)
    return _finalize(gstar.edge_ids, lifted, winners, t1, t2, bids)


def _kpath_thresholds(g, bids, k, e, gstar, lifted, scaled, winner_flow, all_edges):
    try:
        without = flows.min_cost_flow(g, bids, k + 1, allowed=all_edges - {e})
        t1 = without.cost - gstar.cost + bids[e]
    except InfeasibleFlowError:
        t1 = math.inf
    alt = flows.min_cost_flow(g, scaled, k, allowed=gstar.edge_ids - {e})
    w_e = lifted.weights[e]
    t2 = w_e * (alt.cost - winner_flow.cost + scaled[e])
    return t1, t2


def analytic_thresholds_kpath(g: flows.DiGraph, bids: Sequence[float], k: int,
                              agent: int) -> tuple[float, float]:
    """Closed-form (t1, t2) for an agent that currently survives and wins."""
    _check_bids(bids, g.n_edges)
    gstar, lifted, scaled, winner_flow = _kpath_state(g, bids, k)
    if agent not in gstar.edge_ids:
        raise ValidationError("thresholds are defined for surviving agents only")
    return _kpath_thresholds(
        g, bids, k, agent, gstar, lifted, scaled, winner_flow,
        frozenset(range(g.n_edges)))


# ---------------------------------------------------------------------------
# Vertex cover instantiation


def _cover_branch_and_bound(graph: core.UndirectedGraph, scaled: dict[int, float],
                            exclude: Optional[int] = None) -> tuple[float, frozenset[int]]:
    """Minimum scaled-cost vertex cover; deterministic leaf order breaks ties."""
    edges = graph.edges
    best: list = [math.inf, None]

    def rec(idx: int, chosen: set[int], cost: float):
        if cost > best[0] + 1e-12:
            return
        while idx < len(edges):
            u, v = edges[idx]
            if u in chosen or v in chosen:
                idx += 1
                continue
            if u != exclude:
                rec(idx + 1, chosen | {u}, cost + scaled[u])
            if v != exclude:
                rec(idx + 1, chosen | {v}, cost + scaled[v])
            return
        key = tuple(sorted(chosen))
        if (cost < best[0] - 1e-12
                or (abs(cost - best[0]) <= 1e-12
                    and (best[1] is None or key < best[1]))):
            best[0] = cost
            best[1] = key

    rec(0, set(), 0.0)
    if best[1] is None:
        raise MonopolyError("no vertex cover avoids the excluded vertex")
    return best[0], frozenset(best[1])


def primal_dual_cover(graph: core.UndirectedGraph, scaled: dict[int, float]) -> frozenset[int]:
    """Classic factor-2 cover: raise each edge's dual until an endpoint is paid for."""
    residual = dict(scaled)
    cover: set[int] = set()
    for u, v in graph.edges:
        if u in cover or v in cover:
            continue
        eps = min(residual[u], residual[v])
        residual[u] -= eps
        residual[v] -= eps
        if residual[u] <= 1e-12:
            cover.add(u)
        if residual[v] <= 1e-12:
            cover.add(v)
    return frozenset(cover)


def local_optimality_repair(graph: core.UndirectedGraph, scaled: dict[int, float],
                            cover: Iterable[int]) -> frozenset[int]:
    """Swap out any member whose scaled bid exceeds its out-of-cover neighbourhood.

    Each swap strictly lowers the scaled cost, so the loop terminates.
    """
    cover = set(cover)
    for u, v in graph.edges:
        if u not in cover and v not in cover:
            raise ValidationError("input is not a vertex cover")
    adj = graph.adjacency()
    changed = True
    while changed:
        changed = False
        for v in sorted(cover):
            outside = [u for u in adj[v] if u not in cover]
            if scaled[v] > sum(scaled[u] for u in outside) + 1e-12:
                cover.remove(v)
                cover.update(outside)
                changed = True
                break
    return frozenset(cover)


def vertex_cover_mechanism(graph: core.UndirectedGraph, bids: Sequence[float],
                           mode: str = "exact",
                           payment_agents: Optional[Iterable[int]] = None) -> MechanismOutcome:
    """Buy a vertex cover; no pruning is possible, so t1 is infinite.

    `exact` selects the scaled-cost optimum by branch and bound; `approx2`
    runs the monotone factor-2 cover followed by local-optimality repair.
    """
    _check_bids(bids, graph.n_vertices)
    if not graph.edges:
        raise ValidationError("vertex cover auctions need at least one edge")
    if mode not in ("exact", "approx2"):
        raise ValidationError(f"unknown mode {mode!r}")
    if mode == "exact" and graph.n_vertices > EXACT_COVER_CAP:
        raise SizeCapError(
            f"{graph.n_vertices} vertices exceeds the exact-mode cap of {EXACT_COVER_CAP}")
    h = dependency.build_dependency(core.VertexCoverSystem(graph))
    lifted = spectral.lift(h)
    scaled = {v: bids[v] / lifted.weights[v] for v in range(graph.n_vertices)}

    def select(sc: dict[int, float]) -> frozenset[int]:
        if mode == "exact":
            return _cover_branch_and_bound(graph, sc)[1]
        return local_optimality_repair(graph, sc, primal_dual_cover(graph, sc))

    winners = select(scaled)
    cover_cost = sum(scaled[v] for v in winners)
    targets = winners if payment_agents is None else winners & frozenset(payment_agents)
    t1 = {v: math.inf for v in targets}
    t2 = {}
    for v in sorted(targets):
        w_v = lifted.weights[v]
        if mode == "exact":
            avoid_cost, _ = _cover_branch_and_bound(graph, scaled, exclude=v)
            t2[v] = w_v * (avoid_cost - cover_cost + scaled[v])
        else:
            upper = w_v * (1.0 + sum(sc for u, sc in scaled.items() if u != v))

            def wins(beta: float, v=v, w_v=w_v) -> bool:
                trial = dict(scaled)
                trial[v] = beta / w_v
                return v in select(trial)

            t2[v] = _threshold_or_inf(wins, max(upper, bids[v] + 1.0), tol=1e-10)
    return _finalize(frozenset(range(graph.n_vertices)), lifted, winners, t1, t2, bids)


# ---------------------------------------------------------------------------
# r-out-of-k instantiation


def r_out_of_k_mechanism(system: core.ROutOfKSystem, bids: Sequence[float],
                         payment_agents: Optional[Iterable[int]] = None) -> MechanismOutcome:
    """Keep the r+1 cheapest groups, lift by the group-balance weights,
    then drop the group with the highest scaled total."""
    groups = system.groups
    r = system.r
    k = len(groups)
    if k < r + 1:
        raise ValidationError(f"need at least {r + 1} groups, got {k}")
    _check_bids(bids, core.n_agents(system))
    group_bid = [sum(bids[a] for a in grp) for grp in groups]
    order = sorted(range(k), key=lambda i: (group_bid[i], i))
    kept = order[: r + 1]
    boundary = order[r + 1] if k > r + 1 else None

    members = frozenset(a for i in kept for a in groups[i])
    h_edges = set()
    for ia, i in enumerate(kept):
        for j in kept[ia + 1:]:
            for a in groups[i]:
                for b in groups[j]:
                    h_edges.add((min(a, b), max(a, b)))
    h = dependency.DependencyGraph(tuple(sorted(members)), frozenset(h_edges))
    lifted = spectral.lift(h)
    x = {i: lifted.weights[groups[i][0]] for i in kept}
    scaled_group = {i: group_bid[i] / x[i] for i in kept}
    discard = max(kept, key=lambda i: (scaled_group[i], i))
    winner_groups = [i for i in kept if i != discard]
    winners = frozenset(a for i in winner_groups for a in groups[i])

    targets = winners if payment_agents is None else winners & frozenset(payment_agents)
    t1 = {}
    t2 = {}
    for e in sorted(targets):
        gi = next(i for i in winner_groups if e in groups[i])
        rest = group_bid[gi] - bids[e]
        t1[e] = math.inf if boundary is None else group_bid[boundary] - rest
        rival = max(scaled_group[j] for j in kept if j != gi)
        t2[e] = x[gi] * rival - rest
    return _finalize(members, lifted, winners, t1, t2, bids)


# ---------------------------------------------------------------------------
# Square-root reference for single paths


def sqrt_mechanism(g: flows.DiGraph, bids: Sequence[float],
                   payment_agents: Optional[Iterable[int]] = None) -> MechanismOutcome:
    """Single-path auction with explicit per-segment square-root weights.

    Exists as an independent cross-check of the k=1 path mechanism; the
    weights keep the classic 1/sqrt(segment length) scaling instead of
    max-normalization, which leaves winners and payments unchanged.
    """
    _check_bids(bids, g.n_edges)
    gstar = flows.cheapest_kplus1_subgraph(g, bids, 1)
    dec = flows.articulation_decomposition(g, gstar)
    path_a, path_b = flows.flow_paths(g, gstar)
    weights = {}
    alphas = []
    for part in dec.parts:
        side_a = part & frozenset(path_a)
        side_b = part & frozenset(path_b)
        if not side_a or not side_b:
            raise StructureError("each segment must contain edges of both paths")
        for e in side_a:
            weights[e] = 1.0 / math.sqrt(len(side_a))
        for e in side_b:
            weights[e] = 1.0 / math.sqrt(len(side_b))
        alphas.append(math.sqrt(len(side_a) * len(side_b)))
    lifted = spectral.SpectralLift(max(alphas), weights, tuple(alphas), 0.0)
    scaled = [0.0] * g.n_edges
    for e in gstar.edge_ids:
        scaled[e] = bids[e] / weights[e]
    winner_flow = flows.min_cost_flow(g, scaled, 1, allowed=gstar.edge_ids)
    winners = winner_flow.edge_ids
    targets = winners if payment_agents is None else winners & frozenset(payment_agents)
    all_edges = frozenset(range(g.n_edges))
    t1 = {}
    t2 = {}
    for e in sorted(targets):
        t1[e], t2[e] = _kpath_thresholds(
            g, bids, 1, e, gstar, lifted, scaled, winner_flow, all_edges)
    return _finalize(gstar.edge_ids, lifted, winners, t1, t2, bids)


# ---------------------------------------------------------------------------
# VCG baseline


def vcg(instance: core.SetSystemInstance, bids: Sequence[float],
        payment_agents: Optional[Iterable[int]] = None) -> MechanismOutcome:
    """Cheapest feasible set wins; winners get their threshold bids."""
    n = core.n_agents(instance)
    _check_bids(bids, n)
    minimal = core.minimal_feasible_sets(instance)
    if not minimal:
        raise MonopolyError("instance has no feasible set")
    if frozenset.intersection(*minimal):
        raise MonopolyError("instance is not monopoly-free")
    best = None
    for cand in minimal:
        cost = sum(bids[e] for e in cand)
        key = tuple(sorted(cand))
        if best is None or (cost < best[0] - 1e-12
                            or (abs(cost - best[0]) <= 1e-12 and key < best[1])):
            best = (cost, key)
    winners = frozenset(best[1])
    targets = winners if payment_agents is None else winners & frozenset(payment_agents)
    t1 = {e: math.inf for e in targets}
    t2 = {}
    for e in sorted(targets):
        alt = min(sum(bids[o] for o in cand) for cand in minimal if e not in cand)
        t2[e] = alt - (best[0] - bids[e])
    return _finalize(frozenset(range(n)), None, winners, t1, t2, bids)
