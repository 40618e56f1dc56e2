"""
Command line entry point.

Exit codes: 0 success, 2 mission failure, 1 usage or validation error.
``AUVPLAN_LOG_LEVEL`` sets the log verbosity (default WARNING).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from .executor import derive_seed, PATH_STREAM, OBSTACLE_STREAM, ROUTE_STREAM, run_mission
from .export import (ROUTE_COLUMNS, export_results, export_segment_plan, write_csv, write_json)
from .mission import DomainError
from .path_planner import SegmentRequest, plan_segment, timeline_grid
from .route_planner import RouteSettings, plan_route
from .scenario import GeneratorParams, ScenarioError, generate_scenario, load_scenario, save_scenario

log = logging.getLogger("auvplan")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="auvplan", description="PSO route and path planning for waypoint missions")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_ in (("plan-path", "plan one segment from the scenario start to its destination"),
                        ("plan-route", "run the route planner once"),
                        ("run-mission", "run the full mission loop")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--scenario", required=True, type=Path)
        s.add_argument("--seed", type=int, default=None, help="overrides the scenario seed")
        s.add_argument("--out", required=True, type=Path)
        if name == "run-mission":
            s.add_argument("--repeats", type=int, default=1)

    g = sub.add_parser("gen-scenario", help="write a random scenario file")
    g.add_argument("--nodes", type=int, default=30)
    g.add_argument("--tasks", type=int, default=10)
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--t-available", type=float, default=9000.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, type=Path)
    return p


def _plan_path(args) -> int:
    sc = load_scenario(args.scenario)
    seed = sc.seed if args.seed is None else args.seed
    graph = sc.build_graph()
    a, b = graph.position(graph.start_id), graph.position(graph.destination_id)
    settings = sc.path_planner.settings()
    fld = sc.obstacles.field_spec().spawn(a, b, derive_seed(seed, OBSTACLE_STREAM),
                                          timeline_grid(a, b, sc.budget.v_auv, settings,
                                                        settings.clear_horizon))
    cfg = sc.path_planner.swarm.config(derive_seed(seed, PATH_STREAM))
    t0 = time.perf_counter()
    plan = plan_segment(SegmentRequest(tuple(a), tuple(b), fld, sc.budget.v_auv, cfg, settings))
    cpu = time.perf_counter() - t0
    export_segment_plan(plan, args.out, "segment", sc.budget.v_auv)
    write_json(args.out / "summary.json", {
        "flight_time": plan.cost.flight_time, "violation": plan.cost.violation,
        "total_cost": plan.cost.total_cost, "arc_length": plan.curve.arc_length,
        "cpu_time": cpu, "obstacles": len(fld)})
    print(f"flight_time={plan.cost.flight_time:.1f}s violation={plan.cost.violation:.5f}")
    return 0


def _plan_route(args) -> int:
    sc = load_scenario(args.scenario)
    seed = sc.seed if args.seed is None else args.seed
    graph = sc.build_graph()
    t_av = sc.budget.t_available
    cfg = sc.route_planner.swarm.config(derive_seed(seed, ROUTE_STREAM))
    t0 = time.perf_counter()
    route, result = plan_route(graph, t_av * (1.0 - sc.budget.time_reserve), cfg,
                               RouteSettings(sc.route_planner.alpha, sc.route_planner.beta),
                               return_result=True)
    cpu = time.perf_counter() - t0
    write_csv(args.out / "routes.csv", ROUTE_COLUMNS,
              [[1, graph.start_id, graph.destination_id, route.task_count, float(route.total_weight),
                float(route.cost), float(cpu), float(t_av), float(route.total_time),
                "Yes" if route.valid else "No", route.sequence_str()]])
    write_csv(args.out / "traces" / "route_01.csv", ["iteration", "best_cost"],
              ((i, float(c)) for i, c in enumerate(result.trace)))
    print(f"route {route.sequence_str()} weight={route.total_weight:g} "
          f"T_route={route.total_time:.1f}s valid={route.valid}")
    return 0 if route.valid else 2


def _run_mission(args) -> int:
    sc = load_scenario(args.scenario)
    base = sc.seed if args.seed is None else args.seed
    if args.repeats < 1:
        raise UsageError("--repeats must be >= 1")
    status = 0
    for k in range(args.repeats):
        seed = base + k
        rp, pp = sc.planners(seed)
        mlog = run_mission(sc.build_graph(), sc.budget.t_available, rp, pp)
        out = args.out if args.repeats == 1 else args.out / f"run_{k:03d}"
        export_results(mlog, out, sc.budget.v_auv)
        print(f"seed={seed} outcome={mlog.outcome} {mlog.reason} "
              f"T_remained={mlog.t_remained:.1f}s sequence={'-'.join(map(str, mlog.sequence))}")
        if not mlog.success:
            status = 2
    return status


def _gen_scenario(args) -> int:
    params = GeneratorParams(nodes=args.nodes, tasks=args.tasks, edge_density=args.density,
                             t_available=args.t_available)
    save_scenario(generate_scenario(params, args.seed), args.out)
    print(f"wrote {args.out}")
    return 0


COMMANDS = {"plan-path": _plan_path, "plan-route": _plan_route, "run-mission": _run_mission,
            "gen-scenario": _gen_scenario}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("AUVPLAN_LOG_LEVEL", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args = _parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, ScenarioError, DomainError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
