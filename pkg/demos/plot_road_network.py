"""
Building a road graph from surveyed segments
============================================

Segment endpoints that land within a merge tolerance of each other become
one intersection.  The bundled fixture town is a 5 x 4 block grid whose
endpoints carry a few millimetres of jitter.
"""

from lastmile.network import shortest_path
from lastmile.scenario import FIXTURE_SEGMENTS, data_path, load_network

net = load_network(data_path(FIXTURE_SEGMENTS))
print(net)
print("depot", net.depot, "at", net.position(net.depot))

# arcs have half the straight-road speed limit, so travel time is not
# proportional to length
arcs = [e for e in net.edges.values() if e.geometry == "arc"]
print(len(arcs), "arc edges, e.g.", arcs[0], "cost", round(arcs[0].cost, 3), "s")

###############################################################################
# Shortest paths minimise travel time and are asymmetric on one-way streets.

far = max(net.nodes, key=lambda n: shortest_path(net, net.depot, n).cost)
out = shortest_path(net, net.depot, far)
back = shortest_path(net, far, net.depot)
print("to", far, out.nodes, f"{out.cost:.2f} s")
print("back", back.nodes, f"{back.cost:.2f} s")
