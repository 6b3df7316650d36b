"""Time-stepped car-following simulation of planned delivery routes.

Every vehicle leaves the depot at t = 0 from rest and follows its planned
node path.  Acceleration comes from the Intelligent Driver Model with the
desired speed set by the current segment's geometry (``v_s`` on straights,
``v_a`` on arcs).  A vehicle stops for ``dwell`` seconds the first time it
reaches each of its delivery nodes.

Integration is explicit Euler (``v += a dt`` then ``x += v dt``) with speed
clamped at zero.  Node arrivals inside a step are located by linear
interpolation and the leftover part of the step is spent on the next edge,
so recorded times are not quantised to ``dt``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path as FsPath
from typing import Sequence

from .errors import ParseError, SimulationError, ValidationError
from .network import RoadNetwork
from .routing import Route

LITERAL = "literal"
STANDARD = "standard"

DRIVING, DWELLING, DONE = "driving", "dwelling", "done"


@dataclass(frozen=True)
class IdmParams:
    """IDM constants at 1:25 scale.

    ``s0`` (half a car length) and ``vehicle_length`` (a 5 m car at 1:25)
    are scale-model estimates.  ``model`` selects the
    acceleration law: ``"literal"`` uses ``delta`` both as the free-road
    exponent and inside the desired gap, ``"standard"`` is textbook IDM with
    exponent 4.
    """

    theta: float = 1.0
    delta: float = 0.06
    a_max: float = 5.0
    a_min: float = 25.0
    s0: float = 0.1
    v_s: float = 0.5
    v_a: float = 0.25
    dwell: float = 3.0
    vehicle_length: float = 0.2
    model: str = LITERAL

    def __post_init__(self):
        for f in fields(self):
            if f.name == "model":
                continue
            val = getattr(self, f.name)
            if not (isinstance(val, (int, float)) and math.isfinite(val)):
                raise ValidationError(f"IDM parameter {f.name} must be a finite number, got {val!r}")
            if f.name in ("dwell", "vehicle_length"):
                if val < 0:
                    raise ValidationError(f"IDM parameter {f.name} must be >= 0, got {val}")
            elif val <= 0:
                raise ValidationError(f"IDM parameter {f.name} must be > 0, got {val}")
        if not self.v_s > self.v_a:
            raise ValidationError(f"straight limit v_s={self.v_s} must exceed arc limit v_a={self.v_a}")
        if self.model not in (LITERAL, STANDARD):
            raise ValidationError(f"model must be {LITERAL!r} or {STANDARD!r}, got {self.model!r}")

    def limit(self, geometry: str) -> float:
        return self.v_a if geometry == "arc" else self.v_s

    @classmethod
    def load(cls, path) -> "IdmParams":
        try:
            data = json.loads(FsPath(path).read_text())
        except FileNotFoundError:
            raise ParseError(f"{path}: file not found") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(f"{path}: unknown IDM parameters {unknown}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


def idm_accel(v: float, v0: float, s: float = math.inf, ds: float = 0.0,
              params: IdmParams = IdmParams()) -> float:
    """IDM acceleration for speed ``v``, desired speed ``v0`` and gap ``s``.

    ``ds`` is the gap rate, leader speed minus own speed.  An infinite gap
    means free road and drops the interaction term.
    """
    p = params
    root = 2.0 * math.sqrt(p.a_max * p.a_min)
    if p.model == LITERAL:
        free = (v / v0) ** p.delta
        s_star = p.s0 + v * p.theta + v * p.delta * ds / root
    else:
        free = (v / v0) ** 4
        s_star = p.s0 + max(0.0, v * p.theta - v * ds / root)
    interaction = 0.0 if math.isinf(s) else (s_star / s) ** 2
    return p.a_max * (1.0 - free - interaction)


@dataclass
class _Vehicle:
    route: Route
    idx: int = 0  # current edge is path[idx] -> path[idx + 1]
    pos: float = 0.0
    v: float = 0.0
    a: float = 0.0
    status: str = DRIVING
    timer: float = 0.0
    pending: dict = field(default_factory=dict)  # node -> package indices

    @property
    def edge(self):
        p = self.route.path
        return (p[self.idx], p[self.idx + 1])


@dataclass(frozen=True)
class SimResult:
    delivery_times: dict[int, float]
    round_trip_times: dict[int, float]
    trajectory: tuple[tuple, ...]
    max_overspeed: float  # max over steps of (v - segment limit)
    min_gap: float  # smallest same-edge gap to a leader, inf if none seen
    steps: int

    def to_dict(self) -> dict:
        return {
            "delivery_times": {str(j): t for j, t in sorted(self.delivery_times.items())},
            "round_trip_times": {str(i): t for i, t in sorted(self.round_trip_times.items())},
            "steps": self.steps,
        }


def _validate_route(net: RoadNetwork, route: Route):
    path = route.path
    if len(path) < 2:
        raise ValidationError(f"vehicle {route.vehicle}: path needs at least one edge")
    if path[0] != net.depot:
        raise ValidationError(f"vehicle {route.vehicle}: path must start at the depot")
    for u, v in zip(path[:-1], path[1:]):
        net.edge(u, v)


def simulate(net: RoadNetwork, routes: Sequence[Route], deliveries, params: IdmParams = IdmParams(),
             dt: float = 0.02, log_every: int | None = None, max_steps: int = 2_000_000) -> SimResult:
    """Run all routes together and measure delivery and round-trip times.

    ``deliveries`` resolves package indices to nodes (a ``DeliverySet`` or any
    mapping with ``.node`` items).  A vehicle reaching a node waits there if
    the entry of its next edge is occupied.  Vehicles whose states are
    identical, such as those leaving the depot together, ignore each other
    until their states diverge.
    """
    if not dt > 0:
        raise ValidationError(f"dt must be > 0, got {dt}")
    ids = [r.vehicle for r in routes]
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate vehicle ids")
    vehicles = []
    for r in routes:
        _validate_route(net, r)
        veh = _Vehicle(r)
        for j in r.sequence:
            veh.pending.setdefault(deliveries[j].node, []).append(j)
        vehicles.append(veh)

    lengths = {k: e.length for k, e in net.edges.items()}
    limits = {k: params.limit(e.geometry) for k, e in net.edges.items()}
    vlen = params.vehicle_length

    t_j: dict[int, float] = {}
    T_i: dict[int, float] = {}
    log = []
    max_over = -math.inf
    min_gap = math.inf

    def blocked(k, veh, snap):
        p = veh.route.path
        nxt = (p[veh.idx + 1], p[veh.idx + 2])
        for m, other in enumerate(vehicles):
            if m == k or other.status == DONE or snap[m] == snap[k]:
                continue
            # clear in both the live state and the step snapshot, since the
            # leader gap is taken from the snapshot
            if other.edge == nxt and other.pos - vlen < 0.0:
                return True
            if snap[m][0] == nxt and snap[m][1] - vlen < 0.0:
                return True
        return False

    def leader(k, edge, pos, snap):
        best = None
        for m, st in enumerate(snap):
            if m == k or st[0] != edge or st == snap[k]:
                continue
            if st[1] > pos and (best is None or st[1] < best[1]):
                best = st
        return best

    n_steps = 0
    t = 0.0
    while any(v.status != DONE for v in vehicles):
        if n_steps >= max_steps:
            raise SimulationError(f"simulation did not finish within {max_steps} steps (t={t:.1f}s)")
        # leader information comes from the state at the start of the step
        snap = [(v.edge, v.pos, v.v, v.status) if v.status != DONE else (None,) for v in vehicles]
        for k, veh in enumerate(vehicles):
            h = dt
            while h > 1e-12 and veh.status != DONE:
                if veh.status == DWELLING:
                    if veh.timer > h:
                        veh.timer -= h
                        break
                    h -= veh.timer
                    veh.timer = 0.0
                    veh.status = DRIVING
                edge = veh.edge
                length = lengths[edge]
                if veh.pos >= length:
                    if blocked(k, veh, snap):
                        veh.v = 0.0
                        break
                    veh.idx += 1
                    veh.pos = 0.0
                    veh.v = min(veh.v, limits[veh.edge])
                    continue
                lead = leader(k, edge, veh.pos, snap)
                gap, rate, rear = math.inf, 0.0, math.inf
                if lead is not None:
                    rear = lead[1] - vlen
                    gap = rear - veh.pos
                    rate = lead[2] - veh.v
                    min_gap = min(min_gap, gap)
                    if gap <= 0.0:
                        veh.v = 0.0
                        break
                veh.a = idm_accel(veh.v, limits[edge], gap, rate, params)
                v_new = max(0.0, veh.v + veh.a * h)
                dist = v_new * h
                if veh.pos + dist > rear:
                    dist = rear - veh.pos
                    v_new = min(v_new, lead[2])
                if veh.pos + dist < length:
                    veh.pos += dist
                    veh.v = v_new
                    break
                h = max(0.0, h - (length - veh.pos) / v_new)
                veh.pos = length
                veh.v = v_new
                t_now = t + dt - h
                node = veh.route.path[veh.idx + 1]
                for j in veh.pending.pop(node, ()):
                    t_j[j] = t_now
                    veh.status = DWELLING
                    veh.timer = params.dwell
                    veh.v = 0.0
                if veh.idx + 2 == len(veh.route.path):
                    veh.status = DONE
                    veh.v = 0.0
                    T_i[veh.route.vehicle] = t_now
            if veh.status != DONE:
                max_over = max(max_over, veh.v - limits[veh.edge])
        n_steps += 1
        t = n_steps * dt
        if log_every and n_steps % log_every == 0:
            for veh in vehicles:
                if veh.status != DONE:
                    log.append((t, veh.route.vehicle, veh.edge, veh.pos, veh.v))
    for veh in vehicles:
        if veh.pending:
            raise SimulationError(f"vehicle {veh.route.vehicle} never reached nodes {sorted(veh.pending)}")
    return SimResult(t_j, T_i, tuple(log), max_over, min_gap, n_steps)


@dataclass(frozen=True)
class FleetComparison:
    """Planned and simulated costs for one fleet size."""

    k: int
    planned_J_s: float
    planned_J_c: float
    measured_J_s: float
    measured_J_c: float
    planned_total: float = float("nan")
    measured_total: float = float("nan")
    sim: SimResult | None = None

    def to_dict(self) -> dict:
        out = {
            "k": self.k,
            "planned": {"J_s": self.planned_J_s, "J_c": self.planned_J_c, "total": self.planned_total},
            "measured": {"J_s": self.measured_J_s, "J_c": self.measured_J_c, "total": self.measured_total},
        }
        if self.sim is not None:
            out["sim"] = self.sim.to_dict()
        return out


def compare_sweep(net: RoadNetwork, deliveries, evaluations, alpha: float = 0.5,
                  params: IdmParams = IdmParams(), dt: float = 0.02) -> list[FleetComparison]:
    """Simulate each fleet size's routes and score planned vs measured costs.

    Planned and measured components are each normalised by their own maximum
    over the fleet sizes before weighting with ``alpha``.
    """
    rows = []
    m = len(deliveries)
    for ev in evaluations:
        res = simulate(net, ev.routes, deliveries, params, dt)
        rows.append(FleetComparison(
            k=ev.k,
            planned_J_s=ev.J_s,
            planned_J_c=ev.J_c,
            measured_J_s=math.fsum(res.delivery_times.values()) / m,
            measured_J_c=math.fsum(res.round_trip_times.values()),
            sim=res,
        ))
    ps = max(r.planned_J_s for r in rows)
    pc = max(r.planned_J_c for r in rows)
    ms = max(r.measured_J_s for r in rows)
    mc = max(r.measured_J_c for r in rows)
    return [
        replace(r,
                planned_total=alpha * r.planned_J_s / ps + (1 - alpha) * r.planned_J_c / pc,
                measured_total=alpha * r.measured_J_s / ms + (1 - alpha) * r.measured_J_c / mc)
        for r in rows
    ]
