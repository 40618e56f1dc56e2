"""
Route planning with priority vectors
====================================

Each particle holds one priority per waypoint. A route is decoded by walking
from the start and always stepping to the unvisited neighbour with the
highest priority. The cost rewards collected task weight and a route time
close to the available budget.
"""

import numpy as np

from auvplan.route_planner import decode_route, plan_route, score_route
from auvplan.scenario import GeneratorParams, generate_scenario
from auvplan.swarm import SwarmConfig

sc = generate_scenario(GeneratorParams(nodes=12, tasks=5, t_available=6000.0), seed=2)
graph = sc.build_graph()
print(graph)

# a random genome decodes to some route, often an invalid one
genome = np.random.default_rng(0).uniform(-100, 100, graph.n)
r = score_route(decode_route(genome, graph), 6000.0, graph)
print("random genome:", r.sequence_str(), "valid" if r.valid else "invalid", f"cost {r.cost:.3g}")

# the swarm finds a valid high-weight route that fits the budget
best = plan_route(graph, 6000.0, SwarmConfig(seed=1))
print(f"planned: {best.sequence_str()} weight {best.total_weight:g} of {graph.total_weight:g}, "
      f"T_route {best.total_time:.0f} s, cost {best.cost:.4f}")
