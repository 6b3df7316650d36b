"""Directed road network with travel-time edge costs.

Nodes are junctions or straight/arc transitions, edges are one-way road
segments.  Edge cost is ``length / speed_limit`` in seconds and is fixed at
construction time.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError

GEOMETRIES = ("straight", "arc")


@dataclass(frozen=True)
class Node:
    id: int
    position: tuple[float, float]
    is_depot: bool = False


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    length: float
    speed_limit: float
    geometry: str = "straight"

    def __post_init__(self):
        if not (self.length > 0):
            raise ValidationError(
                f"edge {self.source}->{self.target}: length must be > 0, got {self.length}"
            )
        if not (self.speed_limit > 0):
            raise ValidationError(
                f"edge {self.source}->{self.target}: speed limit must be > 0, got {self.speed_limit}"
            )
        if self.geometry not in GEOMETRIES:
            raise ValidationError(
                f"edge {self.source}->{self.target}: unknown geometry {self.geometry!r}"
            )

    @property
    def cost(self) -> float:
        return self.length / self.speed_limit


@dataclass(frozen=True)
class Path:
    nodes: tuple[int, ...]
    cost: float

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class RawSegment:
    """One road segment before endpoint merging.

    ``depot`` names the endpoint (``"start"`` or ``"end"``) that is the depot,
    if any.
    """

    start: tuple[float, float]
    end: tuple[float, float]
    length: float
    speed_limit: float
    geometry: str = "straight"
    depot: str | None = None


class RoadNetwork:
    """Immutable, strongly connected directed graph with a single depot.

    Shortest-path trees are computed lazily per source and cached; the cache
    never changes results, so concurrent read-only use is safe.
    """

    def __init__(self, nodes: Iterable[Node], edges: Iterable[Edge]):
        node_map: dict[int, Node] = {}
        for n in nodes:
            if n.id in node_map:
                raise ValidationError(f"duplicate node id {n.id}")
            node_map[n.id] = n
        depots = [n.id for n in node_map.values() if n.is_depot]
        if len(depots) != 1:
            raise ValidationError(f"exactly one depot node required, found {len(depots)}")

        edge_map: dict[tuple[int, int], Edge] = {}
        for e in edges:
            for end in (e.source, e.target):
                if end not in node_map:
                    raise ValidationError(f"edge {e.source}->{e.target} references unknown node {end}")
            if e.source == e.target:
                raise ValidationError(f"self-loop edge at node {e.source}")
            key = (e.source, e.target)
            if key in edge_map:
                raise ValidationError(f"parallel edge {e.source}->{e.target}")
            edge_map[key] = e

        self._nodes = dict(sorted(node_map.items()))
        self._edges = dict(sorted(edge_map.items()))
        self.depot = depots[0]
        self._costs = {k: e.cost for k, e in self._edges.items()}
        self._succ: dict[int, list[int]] = {i: [] for i in self._nodes}
        self._pred: dict[int, list[int]] = {i: [] for i in self._nodes}
        for u, v in self._edges:
            self._succ[u].append(v)
            self._pred[v].append(u)
        self._sp_cache: dict[int, dict[int, tuple[float, tuple[int, ...]]]] = {}
        self._check_strongly_connected()

    # -- accessors ---------------------------------------------------------
    @property
    def nodes(self) -> Mapping[int, Node]:
        return self._nodes

    @property
    def edges(self) -> Mapping[tuple[int, int], Edge]:
        return self._edges

    def successors(self, node: int) -> Sequence[int]:
        return self._succ[node]

    def edge(self, u: int, v: int) -> Edge:
        try:
            return self._edges[(u, v)]
        except KeyError:
            raise ValidationError(f"no edge {u}->{v}") from None

    def cost(self, u: int, v: int) -> float:
        try:
            return self._costs[(u, v)]
        except KeyError:
            raise ValidationError(f"no edge {u}->{v}") from None

    def position(self, node: int) -> tuple[float, float]:
        return self._nodes[node].position

    def __contains__(self, node: int) -> bool:
        return node in self._nodes

    def __repr__(self):
        return f"RoadNetwork({len(self._nodes)} nodes, {len(self._edges)} edges, depot={self.depot})"

    def _check_strongly_connected(self):
        def reach(adj):
            seen = {self.depot}
            stack = [self.depot]
            while stack:
                u = stack.pop()
                for v in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            return seen

        fwd, back = reach(self._succ), reach(self._pred)
        missing_fwd = sorted(set(self._nodes) - fwd)
        missing_back = sorted(set(self._nodes) - back)
        if missing_fwd:
            raise ValidationError(f"nodes unreachable from depot {self.depot}: {missing_fwd}")
        if missing_back:
            raise ValidationError(f"nodes that cannot reach depot {self.depot}: {missing_back}")

    def _tree(self, source: int) -> dict[int, tuple[float, tuple[int, ...]]]:
        tree = self._sp_cache.get(source)
        if tree is None:
            tree = _dijkstra(self._succ, self._costs, source)
            self._sp_cache[source] = tree
        return tree


def _dijkstra(succ, costs, source):
    # Labels are (cost, node sequence); comparing whole labels makes the
    # lexicographically smallest sequence win among equal-cost paths.
    best: dict[int, tuple[float, tuple[int, ...]]] = {source: (0.0, (source,))}
    done: set[int] = set()
    heap = [(0.0, (source,), source)]
    while heap:
        d, seq, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v in succ[u]:
            if v in done:
                continue
            label = (d + costs[(u, v)], seq + (v,))
            if v not in best or label < best[v]:
                best[v] = label
                heapq.heappush(heap, (label[0], label[1], v))
    return best


def path_cost(net: RoadNetwork, nodes: Sequence[int]) -> float:
    """Sum of edge costs along ``nodes`` in seconds; a single node costs 0."""
    if len(nodes) == 0:
        raise ValidationError("path must contain at least one node")
    if nodes[0] not in net:
        raise ValidationError(f"unknown node {nodes[0]}")
    return math.fsum(net.cost(u, v) for u, v in zip(nodes[:-1], nodes[1:]))


def shortest_path(net: RoadNetwork, source: int, target: int) -> Path:
    """Minimum travel-time path (plain Dijkstra, no heuristic).

    Among equal-cost paths the lexicographically smallest node sequence is
    returned.
    """
    for node in (source, target):
        if node not in net:
            raise ValidationError(f"unknown node id {node}")
    tree = net._tree(source)
    _, seq = tree[target]
    return Path(seq, path_cost(net, seq))


def build_network(segments: Sequence[RawSegment], merge_tolerance: float) -> RoadNetwork:
    """Build a network from raw one-way segments by merging close endpoints.

    Endpoints separated by ``merge_tolerance`` metres or less are unified,
    transitively, into one node placed at the centroid of the merged points.
    Node ids follow the order in which endpoints first appear.
    """
    if len(segments) == 0:
        raise ValidationError("no segments given")
    if not merge_tolerance >= 0:
        raise ValidationError(f"merge tolerance must be >= 0, got {merge_tolerance}")

    points = np.array([p for s in segments for p in (s.start, s.end)], dtype=float)
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    dist = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=-1))
    for i, j in zip(*np.nonzero(np.triu(dist <= merge_tolerance, k=1))):
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    roots = [find(i) for i in range(n)]
    node_of_root: dict[int, int] = {}
    for r in roots:
        node_of_root.setdefault(r, len(node_of_root))
    endpoint_node = [node_of_root[r] for r in roots]

    depot_endpoints = []
    for k, s in enumerate(segments):
        if s.depot is None:
            continue
        if s.depot not in ("start", "end"):
            raise ValidationError(f"segment {k}: depot flag must be 'start' or 'end', got {s.depot!r}")
        depot_endpoints.append(2 * k + (s.depot == "end"))
    if not depot_endpoints:
        raise ValidationError("no segment endpoint flagged as depot")
    depot_nodes = {endpoint_node[i] for i in depot_endpoints}
    if len(depot_nodes) > 1:
        raise ValidationError(f"depot flagged on {len(depot_nodes)} distinct nodes")
    depot = depot_nodes.pop()

    nodes = []
    for root, nid in node_of_root.items():
        members = [i for i in range(n) if roots[i] == root]
        cx, cy = points[members].mean(axis=0)
        nodes.append(Node(nid, (float(cx), float(cy)), nid == depot))

    edges = []
    for k, s in enumerate(segments):
        u, v = endpoint_node[2 * k], endpoint_node[2 * k + 1]
        if u == v:
            raise ValidationError(f"segment {k} collapses to a single node after merging")
        edges.append(Edge(u, v, float(s.length), float(s.speed_limit), s.geometry))
    return RoadNetwork(nodes, edges)
