"""
Waypoint graph, task weights and time budget for the routing layer.

Waypoints carry 1-based contiguous ids. Edges are undirected and carry a task
weight (0 for untasked edges) plus their Euclidean length and the traversal
time at the vehicle's cruise speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra


class DomainError(ValueError):
    """Raised when an input violates an operation's precondition."""


class InfeasibleRouteError(DomainError):
    """Raised when a route uses a pair of waypoints that is not an edge."""

    def __init__(self, pair):
        self.pair = tuple(pair)
        super().__init__(f"no edge between waypoints {pair[0]} and {pair[1]}")


def euclidean_distance(a, b) -> float:
    """Straight-line distance between two 3-D positions, in meters."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DomainError("positions must be finite")
    return math.sqrt(float(np.sum((b - a) ** 2)))


def edge_traversal_time(d: float, v: float) -> float:
    """Time to cover ``d`` meters at constant speed ``v`` (m/s)."""
    if not v > 0:
        raise DomainError(f"speed must be positive, got {v}")
    if d < 0:
        raise DomainError(f"distance must be non-negative, got {d}")
    return d / v


def edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Waypoint:
    id: int
    position: tuple[float, float, float]

    def __post_init__(self):
        pos = tuple(float(c) for c in self.position)
        if len(pos) != 3 or not all(math.isfinite(c) for c in pos):
            raise DomainError(f"waypoint {self.id}: position must be 3 finite numbers")
        object.__setattr__(self, "position", pos)


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    distance: float
    time: float
    weight: float = 0.0

    @property
    def key(self) -> tuple[int, int]:
        return edge_key(self.source, self.target)


@dataclass(frozen=True)
class MissionBudget:
    t_available: float
    v_auv: float = 3.0

    def __post_init__(self):
        if not self.v_auv > 0:
            raise DomainError("v_auv must be positive")
        if not math.isfinite(self.t_available):
            raise DomainError("t_available must be finite")


class MissionGraph:
    """
    Undirected waypoint graph with task-weighted edges.

    Parameters
    ----------
    waypoints : sequence of Waypoint
        Ids must be exactly ``1..n``.
    edges : iterable of (i, j) or (i, j, weight)
        Undirected connections. Distances and times are derived from the
        waypoint positions and ``v_auv``.
    start_id, destination_id : int
        Mission start and destination waypoints.
    v_auv : float
        Cruise speed used for the edge traversal times.

    Notes
    -----
    Row ``k`` of :attr:`adjacency` corresponds to waypoint id ``k + 1``.
    Instances are treated as immutable; :meth:`remove_edges` and
    :meth:`with_start` return new graphs.
    """

    def __init__(self, waypoints: Sequence[Waypoint], edges: Iterable, start_id: int,
                 destination_id: int, v_auv: float = 3.0):
        if not v_auv > 0:
            raise DomainError("v_auv must be positive")
        wps = sorted(waypoints, key=lambda w: w.id)
        ids = [w.id for w in wps]
        if ids != list(range(1, len(wps) + 1)):
            raise DomainError("waypoint ids must be unique and contiguous from 1")
        self.waypoints: tuple[Waypoint, ...] = tuple(wps)
        self.v_auv = float(v_auv)
        n = len(wps)
        for name, wid in (("start_id", start_id), ("destination_id", destination_id)):
            if not 1 <= wid <= n:
                raise DomainError(f"{name}={wid} is not a waypoint of the graph")
        self.start_id = int(start_id)
        self.destination_id = int(destination_id)

        self._edges: dict[tuple[int, int], Edge] = {}
        adjacency = np.zeros((n, n), dtype=bool)
        for e in edges:
            if isinstance(e, Edge):
                i, j, w = e.source, e.target, e.weight
            elif len(e) == 3:
                i, j, w = e
            else:
                (i, j), w = e, 0.0
            i, j = int(i), int(j)
            if i == j:
                raise DomainError(f"self-loop on waypoint {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise DomainError(f"edge ({i}, {j}) references an unknown waypoint")
            key = edge_key(i, j)
            if key in self._edges:
                raise DomainError(f"duplicate edge {key}")
            d = euclidean_distance(wps[i - 1].position, wps[j - 1].position)
            self._edges[key] = Edge(key[0], key[1], d, edge_traversal_time(d, self.v_auv), float(w))
            adjacency[i - 1, j - 1] = adjacency[j - 1, i - 1] = True
        adjacency.setflags(write=False)
        self.adjacency = adjacency
        # neighbour lists sorted by id, used by the route decoder
        self.neighbors: tuple[tuple[int, ...], ...] = tuple(
            tuple(int(k) + 1 for k in np.flatnonzero(adjacency[r])) for r in range(n)
        )

    def __repr__(self):
        return (f"MissionGraph(n={self.n}, edges={len(self._edges)}, "
                f"start={self.start_id}, destination={self.destination_id})")

    @property
    def n(self) -> int:
        return len(self.waypoints)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._edges[k] for k in sorted(self._edges))

    @property
    def total_weight(self) -> float:
        return float(sum(e.weight for e in self._edges.values()))

    def position(self, wid: int) -> np.ndarray:
        return np.array(self.waypoints[wid - 1].position)

    def has_edge(self, i: int, j: int) -> bool:
        return edge_key(i, j) in self._edges

    def edge(self, i: int, j: int) -> Edge:
        try:
            return self._edges[edge_key(i, j)]
        except KeyError:
            raise InfeasibleRouteError((i, j)) from None

    def edge_list(self) -> list[tuple[int, int, float]]:
        return [(e.source, e.target, e.weight) for e in self.edges]

    def remove_edges(self, pairs: Iterable[tuple[int, int]]) -> "MissionGraph":
        drop = {edge_key(*p) for p in pairs}
        keep = [e for k, e in sorted(self._edges.items()) if k not in drop]
        return MissionGraph(self.waypoints, keep, self.start_id, self.destination_id, self.v_auv)

    def with_start(self, start_id: int) -> "MissionGraph":
        return MissionGraph(self.waypoints, self.edges, start_id, self.destination_id, self.v_auv)

    def _time_matrix(self) -> csr_matrix:
        rows, cols, vals = [], [], []
        for e in self._edges.values():
            rows += [e.source - 1, e.target - 1]
            cols += [e.target - 1, e.source - 1]
            # zero-length edges would vanish from a sparse matrix
            vals += [max(e.time, 1e-12)] * 2
        return csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))

    def connected(self, a: int | None = None, b: int | None = None) -> bool:
        """True when waypoints ``a`` and ``b`` (default start/destination) are joined."""
        a = self.start_id if a is None else a
        b = self.destination_id if b is None else b
        return self.fastest_path(a, b) is not None

    def fastest_path(self, a: int, b: int) -> list[int] | None:
        """Minimum-time waypoint sequence from ``a`` to ``b``, or None if disconnected."""
        if a == b:
            return [a]
        dist, pred = dijkstra(self._time_matrix(), directed=False, indices=a - 1,
                              return_predecessors=True)
        if not np.isfinite(dist[b - 1]):
            return None
        seq = [b - 1]
        while seq[-1] != a - 1:
            seq.append(int(pred[seq[-1]]))
        return [k + 1 for k in reversed(seq)]


def route_totals(route: Sequence[int], graph: MissionGraph, v: float) -> tuple[float, float]:
    """
    Total traversal time and collected task weight along a waypoint sequence.

    Raises InfeasibleRouteError naming the first consecutive pair that is not
    an edge of ``graph``.
    """
    if not v > 0:
        raise DomainError("speed must be positive")
    total_time = 0.0
    total_weight = 0.0
    for i, j in zip(route[:-1], route[1:]):
        e = graph.edge(i, j)
        total_time += e.distance / v
        total_weight += e.weight
    return total_time, total_weight
