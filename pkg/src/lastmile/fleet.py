"""Fleet-size sweep: cluster, route, score, and find the Pareto set."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .clustering import ClusterTree, DeliverySet, build_tree, cut
from .errors import OracleCapError, ValidationError
from .network import RoadNetwork
from .routing import EXACT_CAP, AssignmentMatrix, Route, assignment_from_clusters, exact_route, greedy_route


@dataclass(frozen=True)
class FleetEvaluation:
    k: int
    routes: tuple[Route, ...]
    assignment: AssignmentMatrix = field(repr=False)
    J_s: float
    J_c: float
    J_s_norm: float = float("nan")
    J_c_norm: float = float("nan")
    total: float = float("nan")
    pareto: bool = False

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "J_s": self.J_s,
            "J_c": self.J_c,
            "J_s_norm": self.J_s_norm,
            "J_c_norm": self.J_c_norm,
            "total": self.total,
            "pareto": self.pareto,
            "routes": [r.to_dict() for r in self.routes],
        }


@dataclass(frozen=True)
class SweepResult:
    evaluations: tuple[FleetEvaluation, ...]
    best_k: int
    alpha: float
    tree: ClusterTree | None = None

    def __getitem__(self, k: int) -> FleetEvaluation:
        return self.evaluations[k - 1]

    def to_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "best_k": self.best_k,
            "evaluations": [e.to_dict() for e in self.evaluations],
        }
        if self.tree is not None:
            out["cluster_tree"] = self.tree.to_dict()
        return out


def evaluate(net: RoadNetwork, deliveries: DeliverySet, partition: Sequence[Sequence[int]],
             k: int | None = None, n_vehicles: int | None = None) -> FleetEvaluation:
    """Greedy-route each cluster and aggregate mean delivery time and total round trip time."""
    if k is not None and len(partition) != k:
        raise ValidationError(f"partition has {len(partition)} clusters, expected {k}")
    assignment = assignment_from_clusters(partition, n_vehicles)
    routes = []
    for i in range(assignment.n_vehicles):
        pkgs = assignment.packages_of(i)
        if pkgs:
            routes.append(greedy_route(net, deliveries.subset(pkgs), vehicle=i))
    times = [t for r in routes for t in r.delivery_times.values()]
    m = assignment.n_packages
    return FleetEvaluation(
        k=len(partition),
        routes=tuple(routes),
        assignment=assignment,
        J_s=math.fsum(times) / m,
        J_c=math.fsum(r.round_trip_time for r in routes),
    )


def pareto_frontier(points: Sequence[tuple[float, float]]) -> list[bool]:
    """Flag points not dominated under joint minimisation of both coordinates."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValidationError("need at least one point")
    le = (pts[None, :, :] <= pts[:, None, :]).all(axis=-1)  # le[i, j]: j <= i everywhere
    lt = (pts[None, :, :] < pts[:, None, :]).any(axis=-1)
    dominated = (le & lt).any(axis=1)
    return [not d for d in dominated]


def _normalize(evals: Sequence[FleetEvaluation], alpha: float, s_max: float, c_max: float):
    out = []
    for e in evals:
        s, c = e.J_s / s_max, e.J_c / c_max
        out.append(replace(e, J_s_norm=s, J_c_norm=c, total=alpha * s + (1 - alpha) * c))
    return out


def _flag_pareto(evals):
    flags = pareto_frontier([(e.J_c, e.J_s) for e in evals])
    return [replace(e, pareto=f) for e, f in zip(evals, flags)]


def _best_k(evals) -> int:
    # min() keeps the first minimum, i.e. the smaller k on ties
    return min(evals, key=lambda e: e.total).k


def _check_alpha(alpha):
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must be in [0, 1], got {alpha}")


def raw_sweep(net: RoadNetwork, deliveries: DeliverySet, n_vehicles: int):
    """Un-normalised evaluations for k = 1..min(N, M) plus the cluster tree."""
    if n_vehicles < 1:
        raise ValidationError(f"need at least one vehicle, got {n_vehicles}")
    tree = build_tree(deliveries)
    k_max = min(n_vehicles, len(deliveries))
    evals = [evaluate(net, deliveries, cut(tree, k), k, n_vehicles) for k in range(1, k_max + 1)]
    return evals, tree


def sweep(net: RoadNetwork, deliveries: DeliverySet, n_vehicles: int, alpha: float) -> SweepResult:
    """Evaluate every fleet size and pick the one minimising the weighted cost.

    Each cost component is divided by its maximum over the sweep before
    weighting: ``total = alpha * J_s_norm + (1 - alpha) * J_c_norm``.
    """
    _check_alpha(alpha)
    evals, tree = raw_sweep(net, deliveries, n_vehicles)
    evals = _normalize(evals, alpha, max(e.J_s for e in evals), max(e.J_c for e in evals))
    evals = _flag_pareto(evals)
    return SweepResult(tuple(evals), _best_k(evals), alpha, tree)


@dataclass(frozen=True)
class BatchResult:
    sweeps: tuple[SweepResult, ...]
    alpha: float
    mean_total: tuple[float, ...]  # per k, averaged over scenarios that reach that k
    best_k: int
    frontier: tuple[tuple[bool, ...], ...]  # batch-wide Pareto flags per (scenario, k)

    def records(self) -> list[dict]:
        rows = []
        for s, (res, flags) in enumerate(zip(self.sweeps, self.frontier)):
            for e, f in zip(res.evaluations, flags):
                rows.append({
                    "scenario": s, "k": e.k, "J_c": e.J_c, "J_s": e.J_s,
                    "J_c_norm": e.J_c_norm, "J_s_norm": e.J_s_norm, "total": e.total,
                    "pareto": e.pareto, "batch_pareto": f,
                })
        return rows


def batch_sweep(net: RoadNetwork, scenarios: Sequence[DeliverySet], n_vehicles: int,
                alpha: float) -> BatchResult:
    """Sweep many scenarios, normalising by the maximum over the whole batch.

    Totals are normalised first and then averaged per fleet size.
    """
    _check_alpha(alpha)
    if not scenarios:
        raise ValidationError("empty batch")
    raw = [raw_sweep(net, d, n_vehicles) for d in scenarios]
    s_max = max(e.J_s for evals, _ in raw for e in evals)
    c_max = max(e.J_c for evals, _ in raw for e in evals)
    sweeps = []
    for evals, tree in raw:
        evals = _flag_pareto(_normalize(evals, alpha, s_max, c_max))
        sweeps.append(SweepResult(tuple(evals), _best_k(evals), alpha, tree))

    k_max = max(len(s.evaluations) for s in sweeps)
    mean_total = []
    for k in range(1, k_max + 1):
        vals = [s[k].total for s in sweeps if len(s.evaluations) >= k]
        mean_total.append(math.fsum(vals) / len(vals))
    best_k = int(np.argmin(mean_total)) + 1

    flat = [(e.J_c, e.J_s) for s in sweeps for e in s.evaluations]
    flags = iter(pareto_frontier(flat))
    frontier = tuple(tuple(next(flags) for _ in s.evaluations) for s in sweeps)
    return BatchResult(tuple(sweeps), alpha, tuple(mean_total), best_k, frontier)


@dataclass(frozen=True)
class GapRecord:
    scenario: int
    m: int
    greedy_time: float
    exact_time: float
    gap: float
    greedy_seconds: float
    exact_seconds: float

    def to_dict(self) -> dict:
        return self.__dict__.copy()


def gap_study(net: RoadNetwork, scenarios: Sequence[DeliverySet], cap: int = EXACT_CAP) -> list[GapRecord]:
    """Route each scenario with one vehicle greedily and exactly.

    ``gap`` is ``(T_greedy - T_exact) / T_exact``.  Wall-clock timings are
    reported per method and are the only non-deterministic fields.
    """
    for s, d in enumerate(scenarios):
        if len(d) > cap:
            raise OracleCapError(f"scenario {s}: {len(d)} packages exceeds exact-routing cap {cap}")
    records = []
    for s, d in enumerate(scenarios):
        t0 = time.perf_counter()
        g = greedy_route(net, d.locations)
        t1 = time.perf_counter()
        x = exact_route(net, d.locations, cap=cap)
        t2 = time.perf_counter()
        gap = (g.round_trip_time - x.round_trip_time) / x.round_trip_time
        records.append(GapRecord(s, len(d), g.round_trip_time, x.round_trip_time, gap, t1 - t0, t2 - t1))
    return records
