"""Command line entry point: ``lastmile <command> [options]``.

Exit codes: 0 success, 2 parse error, 3 validation error, 4 oracle cap
exceeded, 5 internal error.  Result files are written atomically, so a
failed run never leaves a partial file behind.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .errors import LastMileError, OracleCapError, ValidationError
from .fleet import batch_sweep, gap_study, sweep
from .microsim import LITERAL, STANDARD, IdmParams, compare_sweep, simulate
from .routing import EXACT_CAP
from .scenario import (FIXTURE_NETWORK, DEFAULT_IDM_PARAMS, data_path, dumps, gen_scenarios, load_network,
                       load_scenario, save_scenario, write_atomic)

EXIT_CODES = {"parse": 2, "validation": 3, "cap": 4, "internal": 5}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--network", help="network file (default: scenario's network, else the bundled fixture)")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.add_argument("--seed", type=int, default=0, help="random seed for generated scenarios")
    p.add_argument("--alpha", type=float, help="satisfaction weight in [0, 1]")
    p.add_argument("--dt", type=float, default=0.02, help="simulation step in seconds")
    p.add_argument("--idm-params", help="IDM parameter file (default: bundled 1:25-scale values)")
    p.add_argument("--idm-model", choices=(LITERAL, STANDARD), help="acceleration law override")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="lastmile", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", parents=[common], help="sweep fleet sizes for a scenario")
    p.add_argument("scenario")

    p = sub.add_parser("simulate", parents=[common], help="simulate planned routes and compare costs")
    p.add_argument("scenario")
    p.add_argument("-k", "--fleet-size", type=int, help="simulate one fleet size only")
    p.add_argument("--trajectory", help="write a CSV trajectory log here")
    p.add_argument("--log-every", type=int, default=5, help="trajectory decimation in steps")

    p = sub.add_parser("compare-exact", parents=[common], help="greedy vs exact single-vehicle routing")
    p.add_argument("-m", "--packages", type=int, nargs="+", default=[3, 4, 5, 6])
    p.add_argument("-n", "--count", type=int, default=50)
    p.add_argument("--cap", type=int, default=EXACT_CAP)

    p = sub.add_parser("pareto", parents=[common], help="batch sweeps and Pareto table (CSV)")
    p.add_argument("-m", "--packages", type=int, default=6)
    p.add_argument("-n", "--count", type=int, default=40)
    p.add_argument("-N", "--vehicles", type=int)

    p = sub.add_parser("gen-scenario", parents=[common], help="write random scenario files")
    p.add_argument("-m", "--packages", type=int, required=True)
    p.add_argument("-n", "--count", type=int, default=1)
    p.add_argument("-N", "--vehicles", type=int)
    p.add_argument("--out-dir", default=".")
    return parser


def _emit(text: str, output):
    if output:
        write_atomic(output, text)
    else:
        sys.stdout.write(text)


def _header() -> dict:
    return {"name": "lastmile", "version": __version__}


def _params(args) -> IdmParams:
    params = IdmParams.load(args.idm_params or data_path(DEFAULT_IDM_PARAMS))
    if args.idm_model:
        params = replace(params, model=args.idm_model)
    return params


def _scenario(args):
    net = load_network(args.network) if args.network else None
    s = load_scenario(args.scenario, net)
    if args.alpha is not None:
        s = replace(s, alpha=args.alpha)
        if not 0.0 <= s.alpha <= 1.0:
            raise ValidationError(f"--alpha must be in [0, 1], got {s.alpha}")
    return s


def _network(args):
    return load_network(args.network or data_path(FIXTURE_NETWORK))


def cmd_optimize(args) -> int:
    s = _scenario(args)
    res = sweep(s.network, s.delivery_set(), s.vehicles, s.alpha)
    doc = {"tool": _header(), "seed": s.seed, "scenario": s.to_dict(), "sweep": res.to_dict()}
    _emit(dumps(doc), args.output)
    return 0


def cmd_simulate(args) -> int:
    s = _scenario(args)
    params = _params(args)
    deliveries = s.delivery_set()
    res = sweep(s.network, deliveries, s.vehicles, s.alpha)
    if args.fleet_size is not None:
        if not 1 <= args.fleet_size <= len(res.evaluations):
            raise ValidationError(f"--fleet-size must be in 1..{len(res.evaluations)}, got {args.fleet_size}")
        ev = res[args.fleet_size]
        sim = simulate(s.network, ev.routes, deliveries, params, args.dt,
                       log_every=args.log_every if args.trajectory else None)
        body = {"k": ev.k, "planned": ev.to_dict(), "measured": sim.to_dict()}
        logs = sim.trajectory
    else:
        rows = compare_sweep(s.network, deliveries, res.evaluations, s.alpha, params, args.dt)
        body = {"comparison": [r.to_dict() for r in rows], "best_k_planned": res.best_k,
                "best_k_measured": min(rows, key=lambda r: r.measured_total).k}
        logs = ()
    if args.trajectory:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "vehicle", "edge", "position_m", "speed_mps"])
        for t, veh, edge, pos, v in logs:
            w.writerow([repr(t), veh, f"{edge[0]}-{edge[1]}", repr(pos), repr(v)])
        write_atomic(args.trajectory, buf.getvalue())
    doc = {"tool": _header(), "seed": s.seed, "scenario": s.to_dict(), "dt": args.dt,
           "idm": params.to_dict(), "simulation": body}
    _emit(dumps(doc), args.output)
    return 0


def cmd_compare_exact(args) -> int:
    net = _network(args)
    for m in args.packages:
        if m > args.cap:
            raise OracleCapError(
                f"M={m} exceeds the exact-routing cap of {args.cap} packages")
    records = []
    for m in args.packages:
        scen = gen_scenarios(net, m, args.count, args.seed + m)
        for r in gap_study(net, [x.delivery_set() for x in scen], cap=args.cap):
            records.append({**r.to_dict(), "deliveries": list(scen[r.scenario].deliveries)})
    doc = {"tool": _header(), "seed": args.seed, "cap": args.cap, "records": records}
    _emit(dumps(doc), args.output)
    return 0


def cmd_pareto(args) -> int:
    net = _network(args)
    alpha = 0.5 if args.alpha is None else args.alpha
    scen = gen_scenarios(net, args.packages, args.count, args.seed)
    n = args.vehicles or args.packages
    batch = batch_sweep(net, [x.delivery_set() for x in scen], n, alpha)
    buf = io.StringIO()
    rows = batch.records()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _emit(buf.getvalue(), args.output)
    return 0


def cmd_gen_scenario(args) -> int:
    net_path = Path(args.network) if args.network else data_path(FIXTURE_NETWORK)
    net = load_network(net_path)
    out_dir = Path(args.out_dir)
    ref = os.path.relpath(net_path.resolve(), out_dir.resolve())
    alpha = 0.5 if args.alpha is None else args.alpha
    scen = gen_scenarios(net, args.packages, args.count, args.seed, args.vehicles, alpha, ref)
    for i, s in enumerate(scen):
        save_scenario(s, out_dir / f"scenario_{i:03d}.json")
    return 0


COMMANDS = {
    "optimize": cmd_optimize,
    "simulate": cmd_simulate,
    "compare-exact": cmd_compare_exact,
    "pareto": cmd_pareto,
    "gen-scenario": cmd_gen_scenario,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    paths = {k: getattr(args, k, None) for k in ("scenario", "network", "output", "idm_params", "trajectory")}
    echo = " ".join(f"{k}={v}" for k, v in paths.items() if v)
    print(f"lastmile {args.command}: {echo} seed={args.seed}".rstrip(), file=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except LastMileError as exc:
        print(f"error [{exc.category}]: {exc}", file=sys.stderr)
        return EXIT_CODES[exc.category]
    except Exception as exc:  # noqa: BLE001
        print(f"error [internal]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CODES["internal"]


if __name__ == "__main__":
    sys.exit(main())
