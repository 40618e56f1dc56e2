"""
Mission execution with adaptive route re-planning.

The executor plans a route, hands its edges one at a time to the local path
planner and deducts each realized path time from the remaining budget. When a
path takes longer than the edge's straight-line estimate the rest of the route
is dropped, every edge traversed so far is removed from the graph and a new
route is planned from the current waypoint. The mission ends in success on
reaching the destination with a non-negative budget, or in failure as soon as
the budget goes negative or the destination becomes unreachable.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np

from .mission import Edge, MissionGraph
from .obstacles import FieldSpec
from .path_planner import PlannerSettings, SegmentPlan, SegmentRequest, plan_segment, timeline_grid
from .route_planner import Route, RouteSettings, plan_route, route_from_sequence, score_route
from .swarm import SwarmConfig

log = logging.getLogger(__name__)

# seed streams fanned out from a master seed
GRAPH_STREAM, OBSTACLE_STREAM, ROUTE_STREAM, PATH_STREAM = range(4)


def derive_seed(master: int, stream: int, index: int = 0) -> int:
    return int(np.random.SeedSequence([int(master), stream, index]).generate_state(1)[0])


def expected_edge_time(edge: Edge, v_auv: float) -> float:
    return edge.distance / v_auv


def replan_check(t_path: float, t_expected: float) -> int:
    return int(t_path > t_expected)


@dataclass
class RouteRecord:
    call: int
    start: int
    destination: int
    task_count: int
    weight: float
    cost: float
    cpu_time: float
    t_available: float
    t_route: float
    valid: bool
    sequence: tuple[int, ...]


@dataclass
class SegmentRecord:
    route_id: int
    pp_call: int
    edge: tuple[int, int]
    violation: float
    path_cost: float
    cpu_time: float
    t_path: float
    t_expected: float
    t_available: float
    replan: int
    pp: int


@dataclass
class SegmentOutcome:
    t_path: float
    violation: float
    path_cost: float
    plan: SegmentPlan | None = None


@dataclass
class MissionLog:
    t_initial: float
    routes: list[RouteRecord] = field(default_factory=list)
    segments: list[SegmentRecord] = field(default_factory=list)
    sequence: list[int] = field(default_factory=list)
    outcome: str = "failure"
    reason: str = ""
    t_remained: float = 0.0
    total_weight: float = 0.0
    plans: list = field(default_factory=list, repr=False)
    route_traces: list = field(default_factory=list, repr=False)

    @property
    def success(self) -> bool:
        return self.outcome == "success"


class RoutePlanner(Protocol):
    def __call__(self, graph: MissionGraph, t_available: float, call: int) -> Route: ...


class PathPlanner(Protocol):
    def __call__(self, start: int, target: int, graph: MissionGraph, call: int) -> SegmentOutcome: ...


@dataclass
class PsoRoutePlanner:
    """
    Route layer backed by :func:`plan_route`.

    Routes are planned against ``(1 - time_reserve) * t_available`` to leave
    room for realized paths running longer than their straight-line estimates.
    """

    swarm: SwarmConfig = SwarmConfig()
    settings: RouteSettings = RouteSettings()
    seed: int = 0
    time_reserve: float = 0.0
    traces: list = field(default_factory=list, repr=False)

    def __call__(self, graph, t_available, call):
        cfg = SwarmConfig(**{**self.swarm.__dict__, "seed": derive_seed(self.seed, ROUTE_STREAM, call)})
        budget = max(t_available * (1.0 - self.time_reserve), 1e-9)
        route, result = plan_route(graph, budget, cfg, self.settings, return_result=True)
        self.traces.append(result.trace)
        return route


@dataclass
class PsoPathPlanner:
    """Path layer backed by :func:`plan_segment` on a freshly spawned field per segment."""

    obstacles: FieldSpec = FieldSpec()
    swarm: SwarmConfig = SwarmConfig()
    settings: PlannerSettings = PlannerSettings()
    seed: int = 0
    v_auv: float = 3.0

    def __call__(self, start, target, graph, call):
        a, b = graph.position(start), graph.position(target)
        fld = self.obstacles.spawn(a, b, derive_seed(self.seed, OBSTACLE_STREAM, call),
                                   timeline_grid(a, b, self.v_auv, self.settings,
                                                 self.settings.clear_horizon))
        cfg = SwarmConfig(**{**self.swarm.__dict__, "seed": derive_seed(self.seed, PATH_STREAM, call)})
        plan = plan_segment(SegmentRequest(tuple(a), tuple(b), fld, self.v_auv, cfg, self.settings))
        return SegmentOutcome(plan.cost.flight_time, plan.cost.violation, plan.cost.total_cost, plan)


def _fallback_route(graph: MissionGraph, t_available: float) -> Route | None:
    seq = graph.fastest_path(graph.start_id, graph.destination_id)
    if seq is None:
        return None
    return score_route(route_from_sequence(seq, graph), max(t_available, 1e-9), graph)


def run_mission(graph: MissionGraph, t_available: float, route_planner: RoutePlanner,
                path_planner: PathPlanner, *, clock: Callable[[], float] = time.perf_counter) -> MissionLog:
    """
    Execute a mission from ``graph.start_id`` to ``graph.destination_id``.

    ``route_planner(graph, t_available, call)`` must return a scored
    :class:`Route` starting at ``graph.start_id``;
    ``path_planner(start, target, graph, call)`` returns a
    :class:`SegmentOutcome`. Call indices are 0-based and count calls across
    the whole mission.
    """
    v = graph.v_auv
    mlog = MissionLog(t_initial=float(t_available), t_remained=float(t_available))
    cur = graph.start_id
    dest = graph.destination_id
    mlog.sequence.append(cur)
    if cur == dest:
        mlog.outcome = "success"
        return mlog

    t_av = float(t_available)
    traversed: list[tuple[int, int]] = []
    pp_calls = 0
    while True:
        working = graph.remove_edges(traversed).with_start(cur)
        if not working.connected():
            mlog.reason = "disconnected"
            break
        call = len(mlog.routes)
        t0 = clock()
        route = route_planner(working, t_av, call)
        if not route.complete:
            log.info("route call %d returned no complete route; using fastest path", call + 1)
            route = _fallback_route(working, t_av)
        cpu = clock() - t0
        mlog.routes.append(RouteRecord(call + 1, cur, dest, route.task_count, route.total_weight,
                                       route.cost, cpu, t_av, route.total_time, route.valid,
                                       route.sequence))
        edges = route.edges
        replanned = False
        for k, (i, j) in enumerate(edges):
            t0 = clock()
            seg = path_planner(i, j, working, pp_calls)
            cpu = clock() - t0
            pp_calls += 1
            edge = graph.edge(i, j)
            t_exp = expected_edge_time(edge, v)
            t_av -= seg.t_path
            flag = replan_check(seg.t_path, t_exp)
            more = k < len(edges) - 1
            traversed.append((i, j))
            mlog.sequence.append(j)
            mlog.total_weight += edge.weight
            mlog.segments.append(SegmentRecord(call + 1, k + 1, (i, j), seg.violation, seg.path_cost,
                                               cpu, seg.t_path, t_exp, t_av, flag,
                                               int(more and not flag)))
            mlog.plans.append(seg.plan)
            cur = j
            if t_av < 0:
                mlog.reason = "battery"
                mlog.t_remained = t_av
                return _finish(mlog, route_planner)
            if cur == dest:
                mlog.outcome = "success"
                mlog.t_remained = t_av
                return _finish(mlog, route_planner)
            if flag:
                replanned = True
                break
        if not replanned:
            # route ended away from the destination; plan again from here
            log.debug("route %d ended at %d without reaching %d", call + 1, cur, dest)
    mlog.t_remained = t_av
    return _finish(mlog, route_planner)


def _finish(mlog: MissionLog, route_planner) -> MissionLog:
    mlog.route_traces = list(getattr(route_planner, "traces", []))
    return mlog


@dataclass(frozen=True)
class MissionSummary:
    outcome: str
    route_calls: int
    path_calls: int
    total_violation: float
    total_path_cost: float
    route_cpu_time: float
    path_cpu_time: float
    mission_time: float
    t_remained: float
    total_weight: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def mission_metrics(mlog: MissionLog) -> MissionSummary:
    seg = mlog.segments
    return MissionSummary(
        outcome=mlog.outcome,
        route_calls=len(mlog.routes),
        path_calls=len(seg),
        total_violation=float(sum(s.violation for s in seg)),
        total_path_cost=float(sum(s.path_cost for s in seg)),
        route_cpu_time=float(sum(r.cpu_time for r in mlog.routes)),
        path_cpu_time=float(sum(s.cpu_time for s in seg)),
        mission_time=float(sum(s.t_path for s in seg)),
        t_remained=mlog.t_remained,
        total_weight=mlog.total_weight,
    )
