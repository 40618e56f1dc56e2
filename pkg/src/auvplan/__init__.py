"""
Task-assignment route planning and collision-free path planning for
waypoint missions, both driven by particle swarm optimization.
"""

from .bspline import (ControlPolygon, PathCurve, VehicleState, corridor_bounds, polyline_length,
                      random_control_polygon, sample_spline)
from .executor import (MissionLog, PsoPathPlanner, PsoRoutePlanner, SegmentOutcome, expected_edge_time,
                       mission_metrics, replan_check, run_mission)
from .export import export_results
from .mission import (DomainError, Edge, InfeasibleRouteError, MissionBudget, MissionGraph, Waypoint,
                      edge_traversal_time, euclidean_distance, route_totals)
from .obstacles import (FieldSpec, Obstacle, ObstacleField, ObstacleKind, ObstacleTimeline,
                        point_clearance, spawn_field, step_field)
from .path_planner import PathCost, PlannerSettings, SegmentRequest, evaluate_path, plan_segment
from .route_planner import Route, decode_route, plan_route, route_cost, score_route
from .scenario import Scenario, ScenarioError, generate_scenario, load_scenario, save_scenario
from .swarm import Particle, SwarmConfig, SwarmResult, optimize, velocity_update

__version__ = "0.1.0"
