"""
Choosing a fleet size
=====================

Deliveries are grouped by complete-linkage clustering on their positions.
Cutting the tree at k clusters gives each of k vehicles a group, routed
greedily.  Sweeping k trades mean delivery time against total driving time.
"""

from lastmile.clustering import build_tree, cut
from lastmile.fleet import sweep
from lastmile.scenario import FIXTURE_SCENARIO, data_path, load_scenario

scenario = load_scenario(data_path(FIXTURE_SCENARIO))
net, d = scenario.network, scenario.delivery_set()
print("packages at nodes", scenario.deliveries)

tree = build_tree(d)
for k in (1, 2, 3, 6):
    print(f"k={k}", cut(tree, k))

###############################################################################
# One sweep per weighting.  alpha=1 only cares about customers, alpha=0 only
# about driving time.

for alpha in (0.0, 0.5, 1.0):
    res = sweep(net, d, scenario.vehicles, alpha)
    print(f"\nalpha={alpha}  best k={res.best_k}")
    print(" k     J_s     J_c   total  pareto")
    for ev in res.evaluations:
        print(f"{ev.k:2d} {ev.J_s:7.2f} {ev.J_c:7.2f} {ev.total:7.3f}  {ev.pareto}")

###############################################################################
# Routes for the balanced choice.

best = sweep(net, d, scenario.vehicles, 0.5)
for route in best[best.best_k].routes:
    print(f"vehicle {route.vehicle}: packages {route.sequence}, back after {route.round_trip_time:.1f} s")
