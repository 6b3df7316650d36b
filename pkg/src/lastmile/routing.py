"""Vehicle-to-package assignment and depot-to-depot route construction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Iterable, Sequence

import numpy as np

from .clustering import Delivery
from .errors import OracleCapError, ValidationError
from .network import Path, RoadNetwork, path_cost, shortest_path

EXACT_CAP = 9

PathFn = Callable[[RoadNetwork, int, int], Path]


@dataclass(frozen=True)
class AssignmentMatrix:
    """Binary N x M matrix; ``a[i, j - 1] == 1`` iff vehicle ``i`` carries package ``j``."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a)
        if a.ndim != 2:
            raise ValidationError("assignment matrix must be 2-D")
        if not np.isin(a, (0, 1)).all():
            raise ValidationError("assignment entries must be 0 or 1")
        bad = np.nonzero(a.sum(axis=0) != 1)[0]
        if bad.size:
            raise ValidationError(f"packages {list(bad + 1)} not assigned to exactly one vehicle")
        object.__setattr__(self, "a", a.astype(np.int8))

    @property
    def n_vehicles(self) -> int:
        return self.a.shape[0]

    @property
    def n_packages(self) -> int:
        return self.a.shape[1]

    def packages_of(self, vehicle: int) -> list[int]:
        return [int(j) + 1 for j in np.nonzero(self.a[vehicle])[0]]

    def column_sums(self) -> np.ndarray:
        return self.a.sum(axis=0)


def assignment_from_clusters(partition: Sequence[Sequence[int]], n_vehicles: int | None = None) -> AssignmentMatrix:
    """Vehicle ``i`` gets cluster ``i``; extra vehicles (rows) stay unused."""
    m = sum(len(c) for c in partition)
    n = len(partition) if n_vehicles is None else n_vehicles
    if n < len(partition):
        raise ValidationError(f"{len(partition)} clusters but only {n} vehicles")
    a = np.zeros((n, m), dtype=np.int8)
    for i, cluster in enumerate(partition):
        for j in cluster:
            if not 1 <= j <= m:
                raise ValidationError(f"package index {j} outside 1..{m}")
            a[i, j - 1] += 1
    return AssignmentMatrix(a)


@dataclass(frozen=True)
class Route:
    vehicle: int
    sequence: tuple[int, ...]
    path: tuple[int, ...]
    round_trip_time: float
    delivery_times: dict[int, float] = field(hash=False)

    @property
    def n_deliveries(self) -> int:
        return len(self.sequence)

    def to_dict(self) -> dict:
        return {
            "vehicle": self.vehicle,
            "sequence": list(self.sequence),
            "path": list(self.path),
            "round_trip_time": self.round_trip_time,
            "delivery_times": {str(j): t for j, t in sorted(self.delivery_times.items())},
        }


def _assemble(net: RoadNetwork, vehicle: int, stops: Sequence[Delivery], legs: Sequence[Path]) -> Route:
    path = [net.depot]
    for leg in legs:
        path.extend(leg.nodes[1:])
    # prefix costs so that every t_j is exactly path_cost of a prefix
    prefix = [0.0]
    for u, v in zip(path[:-1], path[1:]):
        prefix.append(net.cost(u, v))
    first_visit: dict[int, int] = {}
    for pos, node in enumerate(path):
        first_visit.setdefault(node, pos)
    times = {}
    for d in stops:
        k = first_visit[d.node]
        times[d.index] = math.fsum(prefix[: k + 1])
    return Route(
        vehicle=vehicle,
        sequence=tuple(d.index for d in stops),
        path=tuple(path),
        round_trip_time=path_cost(net, path),
        delivery_times=times,
    )


def _check_stops(net: RoadNetwork, assigned: Iterable[Delivery]) -> list[Delivery]:
    stops = sorted(assigned, key=lambda d: d.index)
    if not stops:
        raise ValidationError("empty assignment: nothing to route")
    for d in stops:
        if d.node not in net:
            raise ValidationError(f"package {d.index}: unknown node {d.node}")
        if d.node == net.depot:
            raise ValidationError(f"package {d.index}: delivery at the depot")
    return stops


def greedy_route(net: RoadNetwork, assigned: Iterable[Delivery], vehicle: int = 0,
                 path_fn: PathFn = shortest_path) -> Route:
    """Nearest-next route from the depot, then back to the depot.

    At each step the shortest path to every unvisited stop is computed and
    the cheapest is taken; ties go to the lower package index.  For ``n``
    stops this issues ``n (n + 1) / 2 + 1`` path queries.
    """
    remaining = _check_stops(net, assigned)
    here = net.depot
    order, legs = [], []
    while remaining:
        best_k, best_leg = 0, None
        for k, d in enumerate(remaining):
            leg = path_fn(net, here, d.node)
            if best_leg is None or leg.cost < best_leg.cost:
                best_k, best_leg = k, leg
        chosen = remaining.pop(best_k)
        order.append(chosen)
        legs.append(best_leg)
        here = chosen.node
    legs.append(path_fn(net, here, net.depot))
    return _assemble(net, vehicle, order, legs)


def exact_route(net: RoadNetwork, assigned: Iterable[Delivery], vehicle: int = 0,
                cap: int = EXACT_CAP) -> Route:
    """Optimal visiting order by enumerating every permutation.

    Legs are shortest paths between consecutive stops.  Ties go to the
    lexicographically smallest package-index sequence.
    """
    stops = _check_stops(net, assigned)
    n = len(stops)
    if n > cap:
        raise OracleCapError(f"exact routing limited to {cap} stops, got {n}")

    nodes = [net.depot] + [d.node for d in stops]
    legs = {(a, b): shortest_path(net, nodes[a], nodes[b])
            for a in range(n + 1) for b in range(n + 1) if a != b}
    cost = np.zeros((n + 1, n + 1))
    for (a, b), leg in legs.items():
        cost[a, b] = leg.cost

    perms = np.array(list(permutations(range(1, n + 1))), dtype=np.intp)
    totals = cost[0, perms[:, 0]] + cost[perms[:, -1], 0]
    for r in range(n - 1):
        totals += cost[perms[:, r], perms[:, r + 1]]

    # Leg sums and whole-path sums can differ in the last bits; settle
    # near-ties on the exact path cost, then on lexicographic order.
    best = totals.min()
    near = np.nonzero(totals <= best * (1 + 1e-9))[0]
    candidates = []
    for p in near:
        order = [stops[k - 1] for k in perms[p]]
        seq = [0, *perms[p], 0]
        route = _assemble(net, vehicle, order, [legs[(a, b)] for a, b in zip(seq[:-1], seq[1:])])
        candidates.append((route.round_trip_time, route.sequence, route))
    return min(candidates, key=lambda c: (c[0], c[1]))[2]
