import pytest

from lastmile.clustering import DeliverySet
from lastmile.network import Edge, Node, RoadNetwork
from lastmile.scenario import FIXTURE_NETWORK, FIXTURE_SCENARIO, data_path, load_network, load_scenario

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fixture_net():
    return load_network(data_path(FIXTURE_NETWORK))


@pytest.fixture(scope="session")
def fixture_scenario(fixture_net):
    return load_scenario(data_path(FIXTURE_SCENARIO), fixture_net)


def two_way(u, v, length, speed=1.0, geometry="straight"):
    return [Edge(u, v, length, speed, geometry), Edge(v, u, length, speed, geometry)]


@pytest.fixture
def cross_net():
    """Hand-traceable network, unit speed so cost equals length.

          4
          |2
          3
          |1
    5 -1.5- 0 -1- 1 -1- 2
    """
    nodes = [Node(0, (0.0, 0.0), True), Node(1, (1.0, 0.0)), Node(2, (2.0, 0.0)),
             Node(3, (0.0, 1.0)), Node(4, (0.0, 2.0)), Node(5, (-1.0, 0.0))]
    edges = (two_way(0, 1, 1.0) + two_way(1, 2, 1.0) + two_way(0, 3, 1.0)
             + two_way(3, 4, 1.0) + two_way(0, 5, 1.5))
    return RoadNetwork(nodes, edges)


@pytest.fixture
def loop_net():
    """One-way loop 0 -> 1 -> 2 -> 3 -> 0 with a slow return edge."""
    nodes = [Node(i, (float(i), 0.0), i == 0) for i in range(4)]
    edges = [Edge(0, 1, 1.0, 1.0), Edge(1, 2, 1.0, 1.0), Edge(2, 3, 1.0, 1.0), Edge(3, 0, 3.0, 1.0)]
    return RoadNetwork(nodes, edges)


def deliveries(net, nodes):
    return DeliverySet.from_nodes(net, nodes)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
