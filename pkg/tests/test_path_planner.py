import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from auvplan.bspline import ControlPolygon, sample_spline
from auvplan.mission import DomainError
from auvplan.obstacles import (FieldSpec, Obstacle, ObstacleField, ObstacleKind, ObstacleTimeline,
                               iter_steps, point_clearance, spawn_field)
from auvplan.path_planner import (PlannerSettings, SegmentRequest, evaluate_path, plan_segment,
                                  timeline_grid)
from auvplan.swarm import SwarmConfig

EMPTY = ObstacleField((), rng_seed=0)


def sphere(center, radius, oid=0):
    return Obstacle(oid, ObstacleKind.STATIC, tuple(map(float, center)), float(radius), float(radius), 0.0)


def straight(m=3):
    return sample_spline(ControlPolygon.unbounded([(0, 0, 0), (300, 0, 0)]), order=2, m_samples=m)


def test_straight_path_in_empty_field():
    cost = evaluate_path(straight(), EMPTY, 3.0)
    assert (cost.flight_time, cost.violation, cost.total_cost) == (100.0, 0.0, 100.0)


def test_path_through_an_obstacle_center_is_penalized():
    f = ObstacleField((sphere((150, 0, 0), 10),), rng_seed=0)
    cost = evaluate_path(straight(), f, 3.0)
    # the middle sample sits at the center: penetration 1 over 3 samples
    assert cost.violation == pytest.approx(1 / 3)
    assert cost.total_cost > 100.0
    assert cost.total_cost == pytest.approx(100.0 * (1 + 1e3 / 3))


def test_grazing_sample_does_not_violate():
    f = ObstacleField((sphere((150, 10, 0), 10),), rng_seed=0)
    assert point_clearance((150, 0, 0), f)[0] == 0.0
    cost = evaluate_path(straight(), f, 3.0)
    assert cost.violation == 0.0 and cost.total_cost == 100.0


def test_zero_radius_obstacle_never_violates():
    f = ObstacleField((sphere((150, 0, 0), 0),), rng_seed=0)
    assert evaluate_path(straight(), f, 3.0).violation == 0.0


def test_samples_see_obstacles_at_their_own_time():
    # obstacle present only from t = 50 s; the middle sample arrives at t = 50 s
    centers = np.array([[[150.0, 0.0, 0.0]], [[150.0, 0.0, 0.0]]])
    radii = np.array([[0.0], [10.0]])
    tl = ObstacleTimeline(centers, radii, 50.0)
    assert evaluate_path(straight(), tl, 3.0).violation > 0
    # a slower vehicle reaches the middle after 50 s, a faster one before
    assert evaluate_path(straight(), tl, 2.9).violation > 0
    assert evaluate_path(straight(), tl, 3.1).violation == 0.0


def test_start_equal_target_is_rejected():
    with pytest.raises(DomainError):
        SegmentRequest((1, 2, 3), (1, 2, 3), EMPTY)


FAST = SwarmConfig(40, 60)


def test_empty_field_plan_is_near_straight():
    a, b = (0.0, 0.0, 50.0), (2000.0, 1000.0, 20.0)
    d = math.dist(a, b)
    plan = plan_segment(SegmentRequest(a, b, EMPTY, 3.0, FAST))
    curve, cost = plan
    assert cost.violation == 0.0
    assert d / 3.0 <= cost.flight_time <= 1.05 * d / 3.0
    assert np.array_equal(curve.samples[0], a) and np.array_equal(curve.samples[-1], b)


def detour_lower_bound(half_chord, r):
    """Shortest path around a sphere centred on the chord midpoint: two tangents plus an arc."""
    tangent = math.sqrt(half_chord ** 2 - r ** 2)
    arc = r * (math.pi - 2 * math.acos(r / half_chord))
    return 2 * tangent + arc


def test_midpoint_obstacle_forces_a_detour():
    a, b = (0.0, 0.0, 50.0), (600.0, 0.0, 50.0)
    f = ObstacleField((sphere((300, 0, 50), 50),), rng_seed=0)
    curve, cost = plan_segment(SegmentRequest(a, b, f, 3.0, SwarmConfig(80, 100, seed=1)))
    assert cost.violation == 0.0
    assert min(point_clearance(p, f)[0] for p in curve.samples) >= 0.0
    assert cost.flight_time > 600.0 / 3.0
    # samples are 6 m apart, so the polyline may cut the sphere by a sagitta of ~0.1 m
    assert cost.flight_time >= detour_lower_bound(300.0, 50.0) / 3.0 * (1 - 1e-3)


def test_zero_violation_is_certified_against_stepped_field():
    a, b = np.array([0.0, 0.0, 50.0]), np.array([1500.0, 0.0, 50.0])
    s = PlannerSettings()
    fld = FieldSpec((2, 2, 4)).spawn(a, b, seed=3, horizon=timeline_grid(a, b, 3.0, s, s.clear_horizon))
    plan = plan_segment(SegmentRequest(tuple(a), tuple(b), fld, 3.0, SwarmConfig(60, 80, seed=2), s))
    assert plan.cost.violation == 0.0
    dt, n_steps = timeline_grid(a, b, 3.0, s)
    snaps = list(iter_steps(fld, dt, n_steps))
    t = plan.curve.cumulative_length / 3.0
    for p, tj in zip(plan.curve.samples, t):
        k = min(int(math.floor(tj / dt)), n_steps - 1)
        assert point_clearance(p, snaps[k], t_index=k)[0] >= 0.0


def test_plan_trace_never_increases():
    a, b = (0.0, 0.0, 50.0), (1000.0, 0.0, 50.0)
    fld = spawn_field((5, 0, 0), ((0, -200, 0), (1000, 200, 100)), seed=4,
                      keepout=[a, b], keepout_margin=10)
    plan = plan_segment(SegmentRequest(a, b, fld, 3.0, FAST))
    costs = [c for *_, c in plan.trace]
    assert len(costs) == FAST.n_iterations
    assert all(y <= x for x, y in zip(costs, costs[1:]))
    assert costs[-1] == pytest.approx(plan.cost.total_cost)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), which=st.integers(0, 4), grow=st.floats(0.0, 200.0))
def test_enlarging_an_obstacle_never_reduces_violation(seed, which, grow):
    rng = np.random.default_rng(seed)
    pts = rng.random((6, 3)) * (1000, 300, 100)
    curve = sample_spline(ControlPolygon.unbounded(pts))
    fld = spawn_field((5, 0, 0), ((0, 0, 0), (1000, 300, 100)), seed=seed)
    obs = list(fld.obstacles)
    o = obs[which]
    obs[which] = Obstacle(o.id, o.kind, o.center, o.radius + grow, o.base_radius, o.sigma)
    before = evaluate_path(curve, fld, 3.0)
    after = evaluate_path(curve, ObstacleField(tuple(obs), fld.rng_seed), 3.0)
    assert after.violation >= before.violation
    assert before.flight_time >= np.linalg.norm(pts[-1] - pts[0]) / 3.0 - 1e-9
