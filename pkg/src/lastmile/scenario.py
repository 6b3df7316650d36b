"""Network, scenario and results files, and seeded scenario generation.

All files are JSON.  Network files come in two flavours::

    {"nodes": [{"id": 0, "x": 0.0, "y": 0.0, "is_depot": true}, ...],
     "edges": [{"from": 0, "to": 1, "length_m": 1.2,
                "speed_limit_mps": 0.5, "geometry": "straight"}, ...]}

    {"merge_tolerance_m": 0.1,
     "segments": [{"start": [x, y], "end": [x, y], "length_m": 1.2,
                   "speed_limit_mps": 0.5, "geometry": "arc",
                   "depot": "start"}, ...]}

Scenario files::

    {"network": "network.json", "deliveries": [12, 7, 30],
     "vehicles": 3, "alpha": 0.5, "seed": 42}

``network`` is resolved relative to the scenario file.  Package ``j`` is the
``j``-th entry of ``deliveries``.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .clustering import DeliverySet
from .errors import ParseError, ValidationError
from .network import Edge, Node, RawSegment, RoadNetwork, build_network

FIXTURE_NETWORK = "fixture_network.json"
FIXTURE_SEGMENTS = "fixture_segments.json"
FIXTURE_SCENARIO = "fixture_scenario.json"
DEFAULT_IDM_PARAMS = "idm_defaults.json"


def data_path(name: str) -> Path:
    """Path of a file shipped in the package's ``data`` directory."""
    return Path(str(resources.files("lastmile") / "data" / name))


def _read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ParseError(f"{path}: file not found") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def dumps(doc: Any) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_atomic(path, text: str):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- networks ---------------------------------------------------------------

def network_from_dict(data: dict, where: str = "network") -> RoadNetwork:
    if not isinstance(data, dict):
        raise ValidationError(f"{where}: expected an object")
    try:
        if "segments" in data:
            segs = [
                RawSegment(
                    start=(float(s["start"][0]), float(s["start"][1])),
                    end=(float(s["end"][0]), float(s["end"][1])),
                    length=float(s["length_m"]),
                    speed_limit=float(s["speed_limit_mps"]),
                    geometry=s.get("geometry", "straight"),
                    depot=s.get("depot"),
                )
                for s in data["segments"]
            ]
            return build_network(segs, float(data.get("merge_tolerance_m", 0.0)))
        nodes = [Node(int(n["id"]), (float(n["x"]), float(n["y"])), bool(n.get("is_depot", False)))
                 for n in data["nodes"]]
        edges = [Edge(int(e["from"]), int(e["to"]), float(e["length_m"]), float(e["speed_limit_mps"]),
                      e.get("geometry", "straight"))
                 for e in data["edges"]]
    except KeyError as exc:
        raise ValidationError(f"{where}: missing field {exc}") from None
    except (TypeError, IndexError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise ValidationError(f"{where}: {exc}") from None
        raise ValidationError(f"{where}: malformed entry ({exc})") from None
    try:
        return RoadNetwork(nodes, edges)
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def network_to_dict(net: RoadNetwork) -> dict:
    return {
        "nodes": [{"id": n.id, "x": n.position[0], "y": n.position[1], "is_depot": n.is_depot}
                  for n in net.nodes.values()],
        "edges": [{"from": e.source, "to": e.target, "length_m": e.length,
                   "speed_limit_mps": e.speed_limit, "geometry": e.geometry}
                  for e in net.edges.values()],
    }


def load_network(path) -> RoadNetwork:
    return network_from_dict(_read_json(path), str(path))


def save_network(net: RoadNetwork, path):
    write_atomic(path, dumps(network_to_dict(net)))


# -- scenarios --------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    network_path: str
    deliveries: tuple[int, ...]
    vehicles: int
    alpha: float = 0.5
    seed: int | None = None
    network: RoadNetwork | None = field(default=None, compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.deliveries)

    def delivery_set(self) -> DeliverySet:
        if self.network is None:
            raise ValidationError("scenario has no network attached")
        return DeliverySet.from_nodes(self.network, self.deliveries)

    def to_dict(self) -> dict:
        out = {"network": self.network_path, "deliveries": list(self.deliveries),
               "vehicles": self.vehicles, "alpha": self.alpha}
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def validate_scenario(s: Scenario, net: RoadNetwork, where: str = "scenario"):
    if s.m < 1:
        raise ValidationError(f"{where}: deliveries: at least one delivery required")
    if s.vehicles < 1:
        raise ValidationError(f"{where}: vehicles: must be >= 1, got {s.vehicles}")
    if not 0.0 <= s.alpha <= 1.0:
        raise ValidationError(f"{where}: alpha: must be in [0, 1], got {s.alpha}")
    seen = {}
    for k, node in enumerate(s.deliveries):
        loc = f"{where}: deliveries[{k}]"
        if node not in net:
            raise ValidationError(f"{loc}: unknown node {node}")
        if node == net.depot:
            raise ValidationError(f"{loc}: node {node} is the depot")
        if node in seen:
            raise ValidationError(f"{loc}: node {node} duplicates deliveries[{seen[node]}]")
        seen[node] = k


def scenario_from_dict(data: dict, base_dir: Path | None = None, where: str = "scenario",
                       network: RoadNetwork | None = None) -> Scenario:
    if not isinstance(data, dict):
        raise ValidationError(f"{where}: expected an object")
    try:
        net_path = str(data["network"])
        raw = data["deliveries"]
        if not isinstance(raw, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in raw):
            raise ValidationError(f"{where}: deliveries: expected a list of integer node ids")
        vehicles = data["vehicles"]
        if not isinstance(vehicles, int) or isinstance(vehicles, bool):
            raise ValidationError(f"{where}: vehicles: expected an integer")
        alpha = float(data.get("alpha", 0.5))
        seed = data.get("seed")
    except KeyError as exc:
        raise ValidationError(f"{where}: missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"{where}: malformed field ({exc})") from None
    if network is None:
        p = Path(net_path)
        if not p.is_absolute() and base_dir is not None:
            p = base_dir / p
        network = load_network(p)
    s = Scenario(net_path, tuple(raw), vehicles, alpha, seed, network)
    validate_scenario(s, network, where)
    return s


def load_scenario(path, network: RoadNetwork | None = None) -> Scenario:
    """Read and validate a scenario; its network is loaded unless given."""
    path = Path(path)
    return scenario_from_dict(_read_json(path), path.parent, str(path), network)


def save_scenario(s: Scenario, path):
    write_atomic(path, dumps(s.to_dict()))


def gen_scenarios(net: RoadNetwork, m: int, count: int, seed: int, vehicles: int | None = None,
                  alpha: float = 0.5, network_path: str = "network.json") -> list[Scenario]:
    """Draw ``count`` scenarios of ``m`` distinct non-depot delivery nodes.

    Sampling is uniform without replacement from a ``numpy`` generator seeded
    with ``seed``; scenario ``i`` records ``seed`` and is reproducible from it.
    """
    candidates = np.array([n for n in net.nodes if n != net.depot])
    if not 1 <= m <= len(candidates):
        raise ValidationError(f"M must be in 1..{len(candidates)} for this network, got {m}")
    if count < 0:
        raise ValidationError(f"count must be >= 0, got {count}")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        picks = rng.choice(candidates, size=m, replace=False)
        out.append(Scenario(network_path, tuple(int(x) for x in picks),
                            m if vehicles is None else vehicles, alpha, seed, net))
    return out
