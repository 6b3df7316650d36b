"""
Driving the plan in a car-following simulation
==============================================

Planned times assume every vehicle drives at the speed limit from the first
instant.  The simulation adds acceleration, slowing for curves, queueing
behind other vehicles and a 3 s stop at every delivery.
"""

from lastmile.fleet import sweep
from lastmile.microsim import IdmParams, compare_sweep, simulate
from lastmile.scenario import FIXTURE_SCENARIO, data_path, load_scenario

scenario = load_scenario(data_path(FIXTURE_SCENARIO))
net, d = scenario.network, scenario.delivery_set()
res = sweep(net, d, scenario.vehicles, scenario.alpha)

###############################################################################
# Two acceleration laws are available.  The default ``"literal"`` law has a very
# small free-road exponent, so vehicles creep towards the speed limit and lose
# more than a second after every stop.  ``"standard"`` is textbook IDM.

for model in ("literal", "standard"):
    params = IdmParams(model=model)
    rows = compare_sweep(net, d, res.evaluations, scenario.alpha, params)
    print(f"\n{model}: planned best k={res.best_k}, "
          f"simulated best k={min(rows, key=lambda r: r.measured_total).k}")
    print(" k  planned J_c  measured J_c  planned total  measured total")
    for r in rows:
        print(f"{r.k:2d} {r.planned_J_c:12.1f} {r.measured_J_c:13.1f} {r.planned_total:14.3f} {r.measured_total:15.3f}")

###############################################################################
# A trajectory for one vehicle, sampled every 2 s.

ev = res[2]
sim = simulate(net, ev.routes, d, log_every=100)
for t, veh, edge, pos, v in sim.trajectory:
    if veh == ev.routes[0].vehicle:
        print(f"t={t:6.1f}s  edge {edge}  pos {pos:5.2f} m  v {v:.3f} m/s")
