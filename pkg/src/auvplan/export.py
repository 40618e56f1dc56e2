"""
Write mission results to a directory of CSV and JSON files.

Layout::

    summary.json            totals, outcome, final sequence
    mission.json            route and segment records, nested
    routes.csv              one row per route-planner call
    segments.csv            one row per path-planner call
    traces/route_NN.csv     iteration, best_cost
    traces/segment_NN.csv   iteration, violation, flight_time, cost
    trajectories/segment_NN.csv   t, x, y, z
    obstacles/segment_NN.csv      t, id, kind, x, y, z, r

CPU-time columns are wall-clock measurements and are the only
non-deterministic values.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict
from pathlib import Path

from .executor import MissionLog, mission_metrics

ROUTE_COLUMNS = ["Call NO", "WP^S", "WP^D", "Task NO", "Route Weight", "Route Cost", "CPU Time",
                 "T_Available", "T_Route", "Valid", "Route Sequence"]
SEGMENT_COLUMNS = ["Route ID", "PP Call", "Edges", "Violation", "Path Cost", "CPU Time", "T_path",
                   "T_Expected", "T_Available", "Replan Flag", "PP Flag"]
CPU_COLUMNS = {"CPU Time"}


def _num(x) -> str:
    return repr(float(x))


def write_csv(path: Path, header, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_num(c) if isinstance(c, float) else c for c in row])
    return path


def route_rows(mlog: MissionLog):
    for r in mlog.routes:
        yield [r.call, r.start, r.destination, r.task_count, float(r.weight), float(r.cost),
               float(r.cpu_time), float(r.t_available), float(r.t_route), "Yes" if r.valid else "No",
               "-".join(map(str, r.sequence))]


def segment_rows(mlog: MissionLog):
    for s in mlog.segments:
        yield [f"Route-{s.route_id}", s.pp_call, f"{s.edge[0]}-{s.edge[1]}", float(s.violation),
               float(s.path_cost), float(s.cpu_time), float(s.t_path), float(s.t_expected),
               float(s.t_available), s.replan, s.pp]


def log_to_dict(mlog: MissionLog) -> dict:
    return {
        "outcome": mlog.outcome,
        "reason": mlog.reason,
        "t_initial": mlog.t_initial,
        "t_remained": mlog.t_remained,
        "sequence": list(mlog.sequence),
        "routes": [asdict(r) for r in mlog.routes],
        "segments": [asdict(s) for s in mlog.segments],
    }


def summary_dict(mlog: MissionLog) -> dict:
    out = mission_metrics(mlog).as_dict()
    out["reason"] = mlog.reason
    out["t_initial"] = mlog.t_initial
    out["sequence"] = list(mlog.sequence)
    return out


def write_json(path: Path, data) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2) + "\n")
    return path


def export_results(mlog: MissionLog, out_dir, v_auv: float = 3.0) -> list[Path]:
    """Write every artifact of a finished mission; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [write_json(out / "summary.json", summary_dict(mlog))]
    if not mlog.routes and not mlog.segments:
        return written
    written.append(write_json(out / "mission.json", log_to_dict(mlog)))
    written.append(write_csv(out / "routes.csv", ROUTE_COLUMNS, route_rows(mlog)))
    written.append(write_csv(out / "segments.csv", SEGMENT_COLUMNS, segment_rows(mlog)))
    for k, trace in enumerate(mlog.route_traces, start=1):
        written.append(write_csv(out / "traces" / f"route_{k:02d}.csv", ["iteration", "best_cost"],
                                 ((i, float(c)) for i, c in enumerate(trace))))
    for k, plan in enumerate(mlog.plans, start=1):
        if plan is None:
            continue
        written += export_segment_plan(plan, out, f"segment_{k:02d}", v_auv)
    return written


def export_segment_plan(plan, out_dir, name: str = "segment", v_auv: float = 3.0) -> list[Path]:
    out = Path(out_dir)
    return [
        write_csv(out / "traces" / f"{name}.csv", ["iteration", "violation", "flight_time", "cost"],
                  plan.trace),
        write_csv(out / "trajectories" / f"{name}.csv", ["t", "x", "y", "z"], plan.curve.rows(v_auv)),
        write_csv(out / "obstacles" / f"{name}.csv", ["t", "id", "kind", "x", "y", "z", "r"],
                  ((float(t), i, k, float(x), float(y), float(z), float(r))
                   for t, i, k, x, y, z, r in plan.timeline.rows())),
    ]


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
