"""Complete-linkage agglomerative clustering of delivery locations."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .network import RoadNetwork


@dataclass(frozen=True)
class Delivery:
    index: int  # package index j, 1-based
    node: int
    position: tuple[float, float]


@dataclass(frozen=True)
class DeliverySet:
    """Ordered delivery locations; package ``j`` is ``locations[j - 1]``."""

    locations: tuple[Delivery, ...]

    def __post_init__(self):
        idx = [d.index for d in self.locations]
        if idx != list(range(1, len(idx) + 1)):
            raise ValidationError(f"package indices must be 1..M in order, got {idx}")
        nodes = [d.node for d in self.locations]
        if len(set(nodes)) != len(nodes):
            raise ValidationError("delivery nodes must be distinct")

    @classmethod
    def from_nodes(cls, net: RoadNetwork, nodes: Sequence[int]) -> "DeliverySet":
        locs = []
        for j, node in enumerate(nodes, start=1):
            if node not in net:
                raise ValidationError(f"delivery {j}: unknown node {node}")
            if node == net.depot:
                raise ValidationError(f"delivery {j}: node {node} is the depot")
            locs.append(Delivery(j, int(node), net.position(node)))
        return cls(tuple(locs))

    def __len__(self):
        return len(self.locations)

    def __iter__(self):
        return iter(self.locations)

    def __getitem__(self, j: int) -> Delivery:
        """Look up by 1-based package index."""
        if not 1 <= j <= len(self.locations):
            raise KeyError(j)
        return self.locations[j - 1]

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(d.node for d in self.locations)

    def positions(self) -> np.ndarray:
        return np.array([d.position for d in self.locations], dtype=float).reshape(-1, 2)

    def subset(self, indices: Sequence[int]) -> list[Delivery]:
        return [self[j] for j in sorted(indices)]


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    distance: float
    size: int


@dataclass(frozen=True)
class ClusterTree:
    """Merge hierarchy using scipy's numbering.

    Leaves are ``0..M-1`` (package ``labels[i]``); merge ``r`` creates
    cluster ``M + r``.
    """

    labels: tuple[int, ...]
    merges: tuple[Merge, ...]

    @property
    def n_leaves(self) -> int:
        return len(self.labels)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "merges": [[m.left, m.right, m.distance, m.size] for m in self.merges],
        }


def complete_linkage(points, labels: Sequence[int] | None = None) -> ClusterTree:
    """Complete-linkage hierarchy over ``points`` (shape ``(M, 2)``).

    Pairs at equal linkage distance are ordered by their sorted member label
    sets, so the result does not depend on input order quirks.  Runs in
    O(M^2 log M) using a lazily invalidated heap.
    """
    pts = np.asarray(points, dtype=float)
    m = len(pts)
    if m == 0:
        raise ValidationError("cannot cluster an empty delivery set")
    labels = tuple(range(1, m + 1)) if labels is None else tuple(labels)
    if len(labels) != m:
        raise ValidationError("labels and points differ in length")

    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))
    members: dict[int, tuple[int, ...]] = {i: (labels[i],) for i in range(m)}
    # linkage[a][b] for active cluster ids
    linkage: dict[int, dict[int, float]] = {
        i: {j: float(dist[i, j]) for j in range(m) if j != i} for i in range(m)
    }

    def entry(a, b, d):
        ka, kb = members[a], members[b]
        if kb < ka:
            a, b, ka, kb = b, a, kb, ka
        return (d, ka, kb, a, b)

    heap = [entry(i, j, linkage[i][j]) for i in range(m) for j in range(i + 1, m)]
    heapq.heapify(heap)
    merges = []
    next_id = m
    while len(members) > 1:
        d, _, _, a, b = heapq.heappop(heap)
        if a not in members or b not in members:
            continue
        new_members = tuple(sorted(members[a] + members[b]))
        row_a, row_b = linkage.pop(a), linkage.pop(b)
        del members[a], members[b]
        c = next_id
        next_id += 1
        members[c] = new_members
        linkage[c] = {}
        for x in members:
            if x == c:
                continue
            dx = max(row_a[x], row_b[x])
            linkage[c][x] = dx
            linkage[x][c] = dx
            del linkage[x][a], linkage[x][b]
            heapq.heappush(heap, entry(c, x, dx))
        merges.append(Merge(min(a, b), max(a, b), d, len(new_members)))
    return ClusterTree(labels, tuple(merges))


def build_tree(deliveries: DeliverySet) -> ClusterTree:
    """Complete-linkage tree over delivery positions in the plane."""
    if len(deliveries) == 0:
        raise ValidationError("cannot cluster an empty delivery set")
    return complete_linkage(deliveries.positions(), [d.index for d in deliveries])


def cut(tree: ClusterTree, k: int) -> list[list[int]]:
    """Partition into ``k`` clusters by undoing the last ``k - 1`` merges.

    Clusters contain package labels and are ordered by their smallest label.
    """
    m = tree.n_leaves
    if not 1 <= k <= m:
        raise ValidationError(f"k must be in 1..{m}, got {k}")
    groups: dict[int, list[int]] = {i: [tree.labels[i]] for i in range(m)}
    for r, merge in enumerate(tree.merges[: m - k]):
        groups[m + r] = groups.pop(merge.left) + groups.pop(merge.right)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])
