"""
How much does greedy routing lose?
==================================

For one vehicle, nearest-next routing is compared with the best visiting
order found by enumerating every permutation.
"""

import statistics

from lastmile.fleet import gap_study
from lastmile.scenario import FIXTURE_NETWORK, data_path, gen_scenarios, load_network

net = load_network(data_path(FIXTURE_NETWORK))

print(" M  median gap  worst gap  zero-gap share")
for m in (3, 4, 5, 6, 7):
    scen = gen_scenarios(net, m, 50, seed=100 + m)
    recs = gap_study(net, [s.delivery_set() for s in scen])
    gaps = [r.gap for r in recs]
    zero = sum(g == 0 for g in gaps) / len(gaps)
    print(f"{m:2d}  {statistics.median(gaps):10.3f} {max(gaps):10.3f} {zero:15.2f}")
