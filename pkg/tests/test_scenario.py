import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from auvplan.mission import euclidean_distance
from auvplan.scenario import (BOX, GeneratorParams, ObstacleSpec, ScenarioError, generate_scenario,
                              load_scenario, parse_scenario, save_scenario, scenario_to_dict)

MINIMAL = {
    "graph": {
        "waypoints": [{"id": 1, "position": [0, 0, 50]}, {"id": 2, "position": [300, 400, 50]}],
        "edges": [{"from": 1, "to": 2, "weight": 4}],
        "start": 1,
        "destination": 2,
    },
    "budget": {"t_available": 1000},
}


def write(tmp_path, data, name="s.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return p


def test_minimal_scenario(tmp_path):
    sc = load_scenario(write(tmp_path, MINIMAL))
    g = sc.build_graph()
    assert g.n == 2 and len(g.edges) == 1
    assert g.edge(1, 2).distance == 500.0 and g.edge(1, 2).weight == 4.0
    assert sc.budget.v_auv == 3.0 and sc.seed == 0


def test_dangling_reference_is_rejected(tmp_path):
    data = json.loads(json.dumps(MINIMAL))
    data["graph"]["waypoints"] = [{"id": k, "position": [k, 0, 0]} for k in range(1, 6)]
    data["graph"]["edges"] = [{"from": 1, "to": 99}]
    with pytest.raises(ScenarioError, match=r"edges\[0\]\.to: waypoint 99 does not exist"):
        load_scenario(write(tmp_path, data))


def test_unknown_field_names_its_location(tmp_path):
    data = json.loads(json.dumps(MINIMAL))
    data["budget"]["battery"] = 3
    with pytest.raises(ScenarioError, match=r"budget\.battery: unknown field"):
        load_scenario(write(tmp_path, data))


def test_type_error_names_its_location(tmp_path):
    data = json.loads(json.dumps(MINIMAL))
    data["graph"]["waypoints"][1]["position"] = [1, 2]
    with pytest.raises(ScenarioError, match=r"graph\.waypoints\[1\]\.position"):
        load_scenario(write(tmp_path, data))


def test_syntax_error_names_line_and_column(tmp_path):
    p = write(tmp_path, '{\n  "seed": 1,\n  "graph": oops\n}')
    with pytest.raises(ScenarioError, match=r"s\.json:3:12"):
        load_scenario(p)


def test_order_above_control_points_is_rejected():
    data = dict(MINIMAL, path_planner={"control_points": 3, "order": 4})
    with pytest.raises(ScenarioError, match="order"):
        parse_scenario(data)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), nodes=st.integers(2, 15), statics=st.integers(0, 5))
def test_round_trip_is_lossless(tmp_path_factory, seed, nodes, statics):
    params = GeneratorParams(nodes=nodes, tasks=1, edge_density=0.6)
    sc = generate_scenario(params, seed, obstacles=ObstacleSpec(static=statics, sigma_moving=0.7))
    p = save_scenario(sc, tmp_path_factory.mktemp("rt") / "s.json")
    again = load_scenario(p)
    assert again == sc
    assert scenario_to_dict(again) == scenario_to_dict(sc)


def test_two_nodes_full_density_give_one_edge():
    sc = generate_scenario(GeneratorParams(nodes=2, edge_density=1.0, tasks=1), seed=3)
    assert len(sc.graph.edges) == 1 and sc.graph.edges[0].weight >= 1


def test_generator_is_deterministic():
    a = generate_scenario(GeneratorParams(), seed=12)
    b = generate_scenario(GeneratorParams(), seed=12)
    assert a == b
    assert a != generate_scenario(GeneratorParams(), seed=13)


def test_generated_mission_shape():
    # 30 waypoints in a 10 x 10 km, 100 m deep box, 10 tasks, 9000 s budget
    sc = generate_scenario(GeneratorParams(nodes=30, tasks=10, t_available=9000.0), seed=0)
    g = sc.build_graph()
    assert g.n == 30 and g.start_id == 1 and g.destination_id == 30
    assert sum(e.weight > 0 for e in g.edges) == 10
    assert all(1 <= e.weight <= 10 for e in g.edges if e.weight > 0)
    pos = np.array([w.position for w in g.waypoints])
    assert np.all(pos >= 0) and np.all(pos <= np.array(BOX))
    assert g.connected() and sc.budget.t_available == 9000.0
    for e in g.edges:
        assert e.distance == pytest.approx(euclidean_distance(g.position(e.source), g.position(e.target)),
                                           rel=1e-9)


def test_generator_reports_unconnectable_density():
    with pytest.raises(ScenarioError, match="did not connect"):
        generate_scenario(GeneratorParams(nodes=30, edge_density=0.001, max_retries=3), seed=0)
    with pytest.raises(ScenarioError, match="tasks"):
        generate_scenario(GeneratorParams(nodes=2, edge_density=1.0, tasks=5), seed=0)


def test_planners_follow_the_scenario():
    sc = parse_scenario(dict(MINIMAL, seed=9, obstacles={"static": 2},
                             path_planner={"swarm": {"particles": 12, "iterations": 7}}))
    rp, pp = sc.planners()
    assert rp.seed == 9 and pp.seed == 9
    assert pp.obstacles.counts == (2, 0, 0)
    assert pp.swarm.n_particles == 12 and pp.swarm.n_iterations == 7
    assert rp.time_reserve == sc.budget.time_reserve
