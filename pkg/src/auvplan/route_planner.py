"""
Global route planner: PSO over waypoint priorities decoded into routes.

Every waypoint holds a real priority in [-100, 100]. Decoding walks from the
start, each time stepping to the admissible neighbour with the highest
priority (unvisited, joined by an unused edge; ties go to the lowest id) until
it reaches the destination or runs out of neighbours. Only the priority order
matters, which lets a continuous swarm search the discrete route space.

Routes are scored by ::

    alpha * |T_avail - T_route| / T_avail - beta * weight / total_weight + penalty

where ``penalty`` is ``INFEASIBLE_PENALTY`` for a route that is incomplete or
exceeds the budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .mission import DomainError, MissionGraph, edge_key
from .swarm import SwarmConfig, SwarmResult, optimize

PRIORITY_BOUND = 100.0
INFEASIBLE_PENALTY = 1e6


@dataclass(frozen=True)
class Route:
    sequence: tuple[int, ...]
    total_weight: float
    total_time: float
    task_count: int
    complete: bool
    cost: float = math.nan
    valid: bool = False

    @property
    def start(self) -> int:
        return self.sequence[0]

    @property
    def end(self) -> int:
        return self.sequence[-1]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.sequence[:-1], self.sequence[1:]))

    def sequence_str(self) -> str:
        return "-".join(str(w) for w in self.sequence)


def random_genome(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-PRIORITY_BOUND, PRIORITY_BOUND, size=n)


def route_from_sequence(sequence, graph: MissionGraph) -> Route:
    """Build an unscored route; the sequence must use graph edges."""
    seq = tuple(int(w) for w in sequence)
    t = w = 0.0
    tasks = 0
    for i, j in zip(seq[:-1], seq[1:]):
        e = graph.edge(i, j)
        t += e.time
        w += e.weight
        tasks += e.weight > 0
    return Route(seq, w, t, tasks, bool(seq) and seq[0] == graph.start_id and seq[-1] == graph.destination_id)


def decode_route(genome, graph: MissionGraph) -> Route:
    """Greedy priority-adjacency walk from the graph's start waypoint."""
    prio = np.asarray(genome, dtype=float)
    if prio.shape != (graph.n,):
        raise DomainError(f"genome length {prio.size} does not match {graph.n} waypoints")
    prio = prio.tolist()
    neighbors = graph.neighbors
    dest = graph.destination_id
    cur = graph.start_id
    seq = [cur]
    visited = {cur}
    used = set()
    while cur != dest:
        best, best_p = None, -math.inf
        for j in neighbors[cur - 1]:
            if j in visited or edge_key(cur, j) in used:
                continue
            p = prio[j - 1]
            if p > best_p:
                best, best_p = j, p
        if best is None:
            break
        used.add(edge_key(cur, best))
        visited.add(best)
        seq.append(best)
        cur = best
    return route_from_sequence(seq, graph)


def route_cost(route: Route, t_available: float, graph: MissionGraph,
               alpha: float = 1.0, beta: float = 1.0) -> float:
    if not t_available > 0:
        raise DomainError("t_available must be positive")
    w_total = graph.total_weight
    residual = abs(t_available - route.total_time) / t_available
    gain = route.total_weight / w_total if w_total > 0 else 0.0
    feasible = route.complete and route.total_time <= t_available
    return alpha * residual - beta * gain + (0.0 if feasible else INFEASIBLE_PENALTY)


def score_route(route: Route, t_available: float, graph: MissionGraph,
                alpha: float = 1.0, beta: float = 1.0) -> Route:
    """Attach cost and validity (complete and within budget) to a route."""
    c = route_cost(route, t_available, graph, alpha, beta)
    return replace(route, cost=c, valid=route.complete and route.total_time <= t_available)


@dataclass(frozen=True)
class RouteSettings:
    alpha: float = 1.0
    beta: float = 1.0


def plan_route(graph: MissionGraph, t_available: float, cfg: SwarmConfig = SwarmConfig(),
               settings: RouteSettings = RouteSettings(), *, return_result: bool = False):
    """
    Best route from ``graph.start_id`` to ``graph.destination_id``.

    If no particle decodes to a valid route the best invalid one is returned
    with ``valid=False``. With ``return_result=True`` the swarm result is
    returned as well.
    """
    if not graph.connected():
        raise DomainError(f"waypoint {graph.destination_id} is unreachable from {graph.start_id}")
    cache: dict[tuple[int, ...], float] = {}

    def cost(x):
        r = decode_route(x, graph)
        c = cache.get(r.sequence)
        if c is None:
            c = cache[r.sequence] = route_cost(r, t_available, graph, settings.alpha, settings.beta)
        return c

    bounds = (np.full(graph.n, -PRIORITY_BOUND), np.full(graph.n, PRIORITY_BOUND))
    result: SwarmResult = optimize(cost, bounds, cfg)
    best = score_route(decode_route(result.g_best, graph), t_available, graph, settings.alpha, settings.beta)
    return (best, result) if return_result else best
