"""
Scenario files: loading, validation, saving and random generation.

A scenario is one JSON document. See ``docs/scenario_format.md`` for the keys.
Unknown keys are rejected; error messages carry the offending key path, and
syntax errors carry line and column.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .executor import GRAPH_STREAM, PsoPathPlanner, PsoRoutePlanner, derive_seed
from .mission import MissionGraph, Waypoint
from .obstacles import FieldSpec
from .path_planner import PlannerSettings
from .route_planner import RouteSettings
from .swarm import SwarmConfig

BOX = (10000.0, 10000.0, 100.0)


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario file."""


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class WaypointSpec(_Model):
    id: int = Field(ge=1)
    position: tuple[float, float, float]


class EdgeSpec(_Model):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)
    source: int = Field(alias="from")
    target: int = Field(alias="to")
    weight: float = 0.0


class GraphSpec(_Model):
    waypoints: list[WaypointSpec]
    edges: list[EdgeSpec]
    start: int
    destination: int

    @model_validator(mode="after")
    def _refs(self):
        ids = [w.id for w in self.waypoints]
        if sorted(ids) != list(range(1, len(ids) + 1)):
            raise ValueError("waypoint ids must be unique and contiguous from 1")
        known = set(ids)
        for k, e in enumerate(self.edges):
            for name, ref in (("from", e.source), ("to", e.target)):
                if ref not in known:
                    raise ValueError(f"edges[{k}].{name}: waypoint {ref} does not exist "
                                     f"({len(ids)} waypoints)")
            if e.source == e.target:
                raise ValueError(f"edges[{k}]: self-loop on waypoint {e.source}")
        for name in ("start", "destination"):
            if getattr(self, name) not in known:
                raise ValueError(f"{name}: waypoint {getattr(self, name)} does not exist")
        return self


class BudgetSpec(_Model):
    t_available: float = Field(gt=0)
    v_auv: float = Field(default=3.0, gt=0)
    time_reserve: float = Field(default=0.05, ge=0, lt=1)


class ObstacleSpec(_Model):
    static: int = Field(default=0, ge=0)
    static_uncertain: int = Field(default=0, ge=0)
    moving_uncertain: int = Field(default=0, ge=0)
    radius_range: tuple[float, float] = (0.0, 100.0)
    sigma_static_uncertain: Optional[float] = None
    sigma_moving: Optional[float] = 0.5
    keepout_margin: float = 10.0

    def field_spec(self) -> FieldSpec:
        return FieldSpec((self.static, self.static_uncertain, self.moving_uncertain),
                         self.radius_range, self.sigma_static_uncertain, self.sigma_moving,
                         self.keepout_margin)


class SwarmSpec(_Model):
    particles: int = Field(default=80, ge=1)
    iterations: int = Field(default=100, ge=1)
    inertia: tuple[float, float] = (0.9, 0.4)
    c1: float = Field(default=1.5, ge=0)
    c2: float = Field(default=2.0, ge=0)
    velocity_init: float = Field(default=0.1, ge=0)

    def config(self, seed: int = 0) -> SwarmConfig:
        return SwarmConfig(self.particles, self.iterations, tuple(self.inertia), self.c1, self.c2,
                           self.velocity_init, seed)


class RoutePlannerSpec(_Model):
    swarm: SwarmSpec = SwarmSpec()
    alpha: float = 1.0
    beta: float = Field(default=1.0, ge=0)


class PathPlannerSpec(_Model):
    swarm: SwarmSpec = SwarmSpec()
    control_points: int = Field(default=6, ge=2)
    order: int = Field(default=4, ge=2)
    samples: int = Field(default=100, ge=2)
    penalty: float = Field(default=1e3, ge=0)
    lateral_fraction: float = Field(default=0.5, gt=0)
    depth: tuple[float, float] = (0.0, 100.0)

    @model_validator(mode="after")
    def _order(self):
        if self.order > self.control_points:
            raise ValueError("order must not exceed control_points")
        return self

    def settings(self) -> PlannerSettings:
        return PlannerSettings(self.control_points, self.order, self.samples, self.penalty,
                               self.lateral_fraction, tuple(self.depth))


class Scenario(_Model):
    """Everything needed to reproduce a run."""

    seed: int = 0
    graph: GraphSpec
    budget: BudgetSpec
    obstacles: ObstacleSpec = ObstacleSpec()
    route_planner: RoutePlannerSpec = RoutePlannerSpec()
    path_planner: PathPlannerSpec = PathPlannerSpec()

    def build_graph(self) -> MissionGraph:
        g = self.graph
        return MissionGraph([Waypoint(w.id, w.position) for w in g.waypoints],
                            [(e.source, e.target, e.weight) for e in g.edges],
                            g.start, g.destination, self.budget.v_auv)

    def planners(self, seed: int | None = None):
        """Default route and path planners for this scenario, seeded from ``seed`` or the scenario seed."""
        seed = self.seed if seed is None else seed
        rp = PsoRoutePlanner(self.route_planner.swarm.config(),
                             RouteSettings(self.route_planner.alpha, self.route_planner.beta),
                             seed, self.budget.time_reserve)
        pp = PsoPathPlanner(self.obstacles.field_spec(), self.path_planner.swarm.config(),
                            self.path_planner.settings(), seed, self.budget.v_auv)
        return rp, pp


def _format_validation(err: ValidationError, source: str) -> str:
    lines = []
    for e in err.errors():
        loc = ".".join(f"[{p}]" if isinstance(p, int) else str(p) for p in e["loc"]).replace(".[", "[")
        msg = e["msg"]
        if e["type"] == "extra_forbidden":
            msg = "unknown field"
        lines.append(f"{source}: {loc or '<root>'}: {msg}")
    return "\n".join(lines)


def parse_scenario(data, source: str = "<scenario>") -> Scenario:
    try:
        return Scenario.model_validate(data)
    except ValidationError as err:
        raise ScenarioError(_format_validation(err, source)) from None


def load_scenario(path) -> Scenario:
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
    return parse_scenario(data, str(path))


def scenario_to_dict(sc: Scenario) -> dict:
    return sc.model_dump(mode="json", by_alias=True)


def save_scenario(sc: Scenario, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(scenario_to_dict(sc), indent=2) + "\n")
    return path


class GeneratorParams(_Model):
    nodes: int = Field(default=30, ge=2)
    edge_density: float = Field(default=0.5, gt=0, le=1)
    tasks: int = Field(default=10, ge=0)
    weight_range: tuple[int, int] = (1, 10)
    box: tuple[float, float, float] = BOX
    t_available: float = 9000.0
    v_auv: float = 3.0
    max_retries: int = 100


def generate_graph_spec(params: GeneratorParams, seed: int) -> GraphSpec:
    """
    Random waypoint graph with ``params.tasks`` task-weighted edges.

    Each waypoint pair is joined with probability ``edge_density``; draws are
    repeated until start (1) and destination (n) are connected.
    """
    rng = np.random.default_rng(seed)
    n = params.nodes
    pos = rng.random((n, 3)) * np.asarray(params.box)
    waypoints = [WaypointSpec(id=i + 1, position=tuple(float(c) for c in pos[i])) for i in range(n)]
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for _ in range(params.max_retries):
        keep = [p for p, u in zip(pairs, rng.random(len(pairs))) if u < params.edge_density]
        g = MissionGraph([Waypoint(w.id, w.position) for w in waypoints], keep, 1, n, params.v_auv)
        if keep and g.connected():
            break
    else:
        raise ScenarioError(f"edge density {params.edge_density} did not connect waypoints 1 and {n} "
                            f"within {params.max_retries} draws")
    if params.tasks > len(keep):
        raise ScenarioError(f"{params.tasks} tasks requested but only {len(keep)} edges drawn")
    tasked = set(rng.choice(len(keep), size=params.tasks, replace=False).tolist())
    lo, hi = params.weight_range
    weights = rng.integers(lo, hi + 1, size=len(keep))
    edges = [EdgeSpec(source=i, target=j, weight=float(weights[k]) if k in tasked else 0.0)
             for k, (i, j) in enumerate(keep)]
    return GraphSpec(waypoints=waypoints, edges=edges, start=1, destination=n)


def generate_scenario(params: GeneratorParams = GeneratorParams(), seed: int = 0, **overrides) -> Scenario:
    """Scenario with a generated graph; other sections take defaults or ``overrides``."""
    graph = generate_graph_spec(params, derive_seed(seed, GRAPH_STREAM))
    fields = dict(seed=seed, graph=graph,
                  budget=BudgetSpec(t_available=params.t_available, v_auv=params.v_auv))
    fields.update(overrides)
    return Scenario(**fields)
