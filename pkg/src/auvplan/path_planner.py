"""
Local planner: PSO over B-spline control points between two waypoints.

A candidate path is scored by its flight time at constant speed, inflated by
the collision violation::

    cost = flight_time * (1 + penalty * violation)

Sample ``j`` is checked against the obstacle state at its own traversal time
``cumulative_length[j] / v_auv``. Violation is the summed normalized
penetration ``(radius - distance) / radius`` over all sample/obstacle pairs
with the sample strictly inside, divided by the number of samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bspline import ControlPolygon, PathCurve, corridor_bounds, sample_batch, sample_spline
from .mission import DomainError
from .obstacles import ObstacleField, ObstacleTimeline
from .swarm import SwarmConfig, SwarmResult, SwarmState, optimize

DEFAULT_PENALTY = 1e3


@dataclass(frozen=True)
class PathCost:
    flight_time: float
    violation: float
    total_cost: float


@dataclass(frozen=True)
class PlannerSettings:
    n_control: int = 6
    order: int = 4
    m_samples: int = 100
    penalty: float = DEFAULT_PENALTY
    lateral_fraction: float = 0.5
    depth: tuple[float, float] = (0.0, 100.0)
    # obstacle timeline spans this many straight-line flight times
    horizon: float = 3.0
    # spawned obstacles keep the endpoints clear for this many straight-line flight times
    clear_horizon: float = 1.5


@dataclass(frozen=True)
class SegmentRequest:
    start: tuple[float, float, float]
    target: tuple[float, float, float]
    field: ObstacleField
    v_auv: float = 3.0
    swarm: SwarmConfig = SwarmConfig()
    settings: PlannerSettings = PlannerSettings()

    def __post_init__(self):
        if np.allclose(self.start, self.target):
            raise DomainError("segment start and target coincide")
        if not self.v_auv > 0:
            raise DomainError("v_auv must be positive")


@dataclass
class SegmentPlan:
    curve: PathCurve
    cost: PathCost
    timeline: ObstacleTimeline
    trace: list = field(default_factory=list)  # (iteration, violation, flight_time, cost)
    result: SwarmResult | None = None

    def __iter__(self):
        yield self.curve
        yield self.cost


def batch_costs(samples: np.ndarray, timeline: ObstacleTimeline, v_auv: float,
                penalty: float = DEFAULT_PENALTY):
    """Flight time, violation and total cost for a ``(P, m, 3)`` batch of sampled paths."""
    gaps = np.linalg.norm(np.diff(samples, axis=1), axis=2)
    cum = np.concatenate([np.zeros((len(samples), 1)), np.cumsum(gaps, axis=1)], axis=1)
    flight = cum[:, -1] / v_auv
    m = samples.shape[1]
    if timeline.n_obstacles == 0:
        violation = np.zeros(len(samples))
    else:
        k = timeline.index(cum / v_auv)  # (P, m)
        centers = timeline.centers[k]  # (P, m, N, 3)
        radii = timeline.radii[k]  # (P, m, N)
        dist = np.linalg.norm(samples[:, :, None, :] - centers, axis=3)
        inside = (dist < radii) & (radii > 0)
        depth = np.where(inside, (radii - dist) / np.where(radii > 0, radii, 1.0), 0.0)
        violation = depth.sum(axis=(1, 2)) / m
    return flight, violation, flight * (1.0 + penalty * violation)


def evaluate_path(curve: PathCurve, timeline: ObstacleTimeline | ObstacleField, v_auv: float,
                  penalty: float = DEFAULT_PENALTY) -> PathCost:
    """
    Score a sampled curve. An :class:`ObstacleField` is treated as frozen in time.
    """
    if isinstance(timeline, ObstacleField):
        timeline = ObstacleTimeline.static(timeline)
    f, vio, tot = batch_costs(curve.samples[None], timeline, v_auv, penalty)
    return PathCost(float(f[0]), float(vio[0]), float(tot[0]))


def timeline_grid(start, target, v_auv: float, settings: PlannerSettings = PlannerSettings(),
                  horizon: float | None = None):
    """
    ``(dt, n_steps)``: one step per straight-line sample interval, covering
    ``horizon`` (default ``settings.horizon``) straight-line flight times.
    """
    straight = float(np.linalg.norm(np.subtract(target, start))) / v_auv
    dt = straight / (settings.m_samples - 1)
    horizon = settings.horizon if horizon is None else horizon
    return dt, int(math.ceil(horizon * (settings.m_samples - 1))) + 1


def segment_timeline(req: SegmentRequest) -> ObstacleTimeline:
    """Step the request's field at the path's sample resolution over the planning horizon."""
    return ObstacleTimeline.from_field(req.field, *timeline_grid(req.start, req.target, req.v_auv, req.settings))


def plan_segment(req: SegmentRequest) -> SegmentPlan:
    """
    Search the free control points for the cheapest path from start to target.

    Returns a :class:`SegmentPlan`; unpacking it yields ``(curve, cost)``.
    """
    s = req.settings
    start = np.asarray(req.start, dtype=float)
    target = np.asarray(req.target, dtype=float)
    lower, upper = corridor_bounds(start, target, s.n_control, s.lateral_fraction, s.depth)
    timeline = segment_timeline(req)
    n_free = s.n_control - 2

    def decode(X):
        pts = np.empty((len(X), s.n_control, 3))
        pts[:, 0] = start
        pts[:, -1] = target
        pts[:, 1:-1] = X.reshape(len(X), n_free, 3)
        return pts

    def cost(X):
        samples = sample_batch(decode(X), s.order, s.m_samples)
        return batch_costs(samples, timeline, req.v_auv, s.penalty)[2]

    trace = []

    def record(state: SwarmState):
        samples = sample_batch(decode(state.g_best[None]), s.order, s.m_samples)
        f, vio, tot = batch_costs(samples, timeline, req.v_auv, s.penalty)
        trace.append((state.iteration, float(vio[0]), float(f[0]), float(tot[0])))

    result = optimize(cost, (lower[1:-1].ravel(), upper[1:-1].ravel()), req.swarm,
                      vectorized=True, callback=record)
    pts = decode(result.g_best[None])[0]
    curve = sample_spline(ControlPolygon(pts, lower, upper), s.order, s.m_samples)
    return SegmentPlan(curve, evaluate_path(curve, timeline, req.v_auv, s.penalty), timeline, trace, result)
