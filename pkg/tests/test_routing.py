import itertools
import time

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lastmile.errors import OracleCapError, ValidationError
from lastmile.network import path_cost, shortest_path
from lastmile.routing import AssignmentMatrix, assignment_from_clusters, exact_route, greedy_route

from .conftest import deliveries
from .oracles import random_strong_graph


def check_route(net, route, stops):
    assert route.path[0] == net.depot and route.path[-1] == net.depot
    assert sorted(route.sequence) == sorted(d.index for d in stops)
    assert route.round_trip_time == path_cost(net, route.path)
    node_of = {d.index: d.node for d in stops}
    # delivery nodes appear in order as a subsequence of the path
    it = iter(route.path)
    assert all(node_of[j] in it for j in route.sequence)
    for j, t in route.delivery_times.items():
        first = route.path.index(node_of[j])
        assert t == path_cost(net, route.path[: first + 1])
        assert t <= route.round_trip_time


class TestAssignment:
    def test_single_vehicle(self):
        a = assignment_from_clusters([[1, 2, 3]])
        assert a.a.tolist() == [[1, 1, 1]]

    def test_singletons(self):
        a = assignment_from_clusters([[1], [2], [3]])
        assert a.a.tolist() == np.eye(3, dtype=int).tolist()

    def test_transcription(self):
        a = assignment_from_clusters([[1, 3], [2]])
        assert a.a.tolist() == [[1, 0, 1], [0, 1, 0]]
        assert a.packages_of(0) == [1, 3]

    def test_unused_vehicles(self):
        a = assignment_from_clusters([[1, 2]], n_vehicles=3)
        assert a.n_vehicles == 3
        assert a.column_sums().tolist() == [1, 1]
        assert a.packages_of(2) == []

    def test_column_constraint(self):
        with pytest.raises(ValidationError):
            AssignmentMatrix(np.array([[1, 1], [1, 0]]))
        with pytest.raises(ValidationError):
            assignment_from_clusters([[1, 2], [2]])
        with pytest.raises(ValidationError):
            AssignmentMatrix(np.array([[2, 0]]))


class TestGreedy:
    def test_single_delivery(self, cross_net):
        (d,) = deliveries(cross_net, [4])
        r = greedy_route(cross_net, [d])
        assert r.path == (0, 3, 4, 3, 0)
        assert r.delivery_times == {1: 2.0}
        assert r.round_trip_time == 4.0

    def test_tie_goes_to_lower_index(self, cross_net):
        # nodes 1 and 3 are both 1 s from the depot
        r = greedy_route(cross_net, deliveries(cross_net, [3, 1]).locations)
        assert r.sequence == (1, 2)
        r = greedy_route(cross_net, deliveries(cross_net, [1, 3]).locations)
        assert r.sequence == (1, 2)
        assert r.path[:2] == (0, 1)

    def test_hand_trace(self, cross_net):
        # packages 1..4 at nodes 2, 4, 5, 1
        # from 0: costs 2, 2, 1.5, 1 -> package 4 (node 1)
        # from 1: costs 1, 3, 2.5   -> package 1 (node 2)
        # from 2: costs 4, 3.5      -> package 3 (node 5)
        # from 5: cost 3.5          -> package 2 (node 4), then 2 back
        d = deliveries(cross_net, [2, 4, 5, 1])
        r = greedy_route(cross_net, d.locations)
        assert r.sequence == (4, 1, 3, 2)
        assert r.path == (0, 1, 2, 1, 0, 5, 0, 3, 4, 3, 0)
        assert r.round_trip_time == 11.0
        assert r.delivery_times == {4: 1.0, 1: 2.0, 3: 5.5, 2: 9.0}
        check_route(cross_net, r, d.locations)

    def test_query_count(self, fixture_net):
        calls = []

        def counting(net, a, b):
            calls.append((a, b))
            return shortest_path(net, a, b)

        nodes = [n for n in fixture_net.nodes if n != fixture_net.depot]
        for n in (1, 2, 5, 12):
            calls.clear()
            greedy_route(fixture_net, deliveries(fixture_net, nodes[:n]).locations, path_fn=counting)
            assert len(calls) == sum(n - r + 1 for r in range(1, n + 1)) + 1

    def test_errors(self, cross_net):
        with pytest.raises(ValidationError, match="empty"):
            greedy_route(cross_net, [])


class TestExact:
    def test_single_delivery_equals_greedy(self, cross_net):
        d = deliveries(cross_net, [5]).locations
        assert exact_route(cross_net, d) == greedy_route(cross_net, d)

    def test_loop_orders_by_distance(self, loop_net):
        # packages 1..3 at nodes 3, 1, 2 on a one-way loop
        d = deliveries(loop_net, [3, 1, 2]).locations
        r = exact_route(loop_net, d)
        assert r.sequence == (2, 3, 1)
        assert r.round_trip_time == 6.0
        # visiting the far node first forces another lap
        by_index = {x.index: x for x in d}
        for order in itertools.permutations((1, 2, 3)):
            if order[0] == 1:
                legs = [0] + [by_index[j].node for j in order] + [0]
                cost = sum(shortest_path(loop_net, a, b).cost for a, b in zip(legs[:-1], legs[1:]))
                assert cost > 6.0

    def test_cap(self, fixture_net):
        nodes = [n for n in fixture_net.nodes if n != fixture_net.depot][:4]
        with pytest.raises(OracleCapError):
            exact_route(fixture_net, deliveries(fixture_net, nodes).locations, cap=3)

    @pytest.mark.parametrize("seed", range(15))
    def test_matches_networkx_enumeration(self, seed, fixture_net):
        # independent oracle: networkx distances + explicit permutation loop
        rng = np.random.default_rng(seed)
        g = nx.DiGraph()
        for (u, v), e in fixture_net.edges.items():
            g.add_edge(u, v, weight=e.cost)
        dist = dict(nx.all_pairs_dijkstra_path_length(g))
        cand = [n for n in fixture_net.nodes if n != fixture_net.depot]
        nodes = [int(x) for x in rng.choice(cand, size=5, replace=False)]
        d = deliveries(fixture_net, nodes).locations
        best = min(
            sum(dist[a][b] for a, b in zip([fixture_net.depot, *p], [*p, fixture_net.depot]))
            for p in itertools.permutations(nodes)
        )
        r = exact_route(fixture_net, d)
        assert r.round_trip_time == pytest.approx(best, rel=1e-12)
        check_route(fixture_net, r, d)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_greedy_never_beats_exact(seed, n):
    rng = np.random.default_rng(seed)
    net = random_strong_graph(rng, 8, integer=False)
    nodes = [int(x) for x in rng.choice(np.arange(1, 8), size=min(n, 7), replace=False)]
    d = deliveries(net, nodes).locations
    g, x = greedy_route(net, d), exact_route(net, d)
    assert g.round_trip_time >= x.round_trip_time
    check_route(net, g, d)
    check_route(net, x, d)
    # greedy delivery times never decrease along the visiting order
    times = [g.delivery_times[j] for j in g.sequence]
    assert times == sorted(times)
    if len(d) == 1:
        assert g.round_trip_time == x.round_trip_time


def test_two_stops_symmetric_costs_coincide(cross_net):
    # cross_net is symmetric, so two-stop greedy and exact agree
    for a, b in itertools.combinations([1, 2, 3, 4, 5], 2):
        d = deliveries(cross_net, [a, b]).locations
        assert greedy_route(cross_net, d).round_trip_time == exact_route(cross_net, d).round_trip_time
