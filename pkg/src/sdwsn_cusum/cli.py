"""Command-line entry point: ``sdwsn-cusum {simulate,detect,evaluate,critical-values,sweep}``.

Failures print one JSON line ``{"error": <type>, "message": <text>}`` to
stderr and exit nonzero (2 for bad arguments, 1 otherwise).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .critical import CriticalValueTable
from .errors import CusumError
from .evaluation import render_table
from .experiment import ALPHAS, KS, ExperimentSpec, run_detect, run_evaluate, run_simulate, run_sweep
from .sim import load_scenario


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("UsageError", message, 2)


def _fail(kind: str, message: str, code: int = 1):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    sys.exit(code)


def _add_scenario_flags(p):
    p.add_argument("--nodes", type=int, nargs="+", default=[100], help="grid sizes (36 or 100)")
    p.add_argument("--attack", nargs="+", choices=["none", "fdff", "fni"], default=["fdff"])
    p.add_argument("--attackers-pct", type=float, nargs="+", default=[20.0])
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--seed", type=int, default=0, help="replication i uses seed + i")
    p.add_argument("--scenario", type=Path, help="key=value or JSON file of extra scenario settings")


def _add_detector_flags(p):
    p.add_argument("--k", type=int, nargs="+", default=list(KS))
    p.add_argument("--alpha", type=float, nargs="+", default=list(ALPHAS))
    p.add_argument("--gamma", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sdwsn-cusum", description="CUSUM-based DDoS detection for software-defined WSNs")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="write trace files for a scenario grid")
    _add_scenario_flags(p)

    p = sub.add_parser("detect", help="run the monitor over every trace in OUT/traces")
    _add_detector_flags(p)

    p = sub.add_parser("evaluate", help="score event logs into one table per scenario")
    _add_detector_flags(p)

    p = sub.add_parser("critical-values", help="(re)generate the critical-value cache")
    p.add_argument("--alpha", type=float, nargs="+", default=list(ALPHAS))
    p.add_argument("--gamma", type=float, nargs="+", default=[0.0])
    p.add_argument("--paths", type=int, default=None, help="Monte-Carlo paths")
    p.add_argument("--grid", type=int, default=None, help="grid points per path")

    p = sub.add_parser("sweep", help="simulate, detect and evaluate the full grid")
    _add_scenario_flags(p)
    _add_detector_flags(p)
    p.set_defaults(nodes=[36, 100], attack=["fdff", "fni", "none"], attackers_pct=[5.0, 20.0])

    for p in sub.choices.values():
        p.add_argument("--out", type=Path, default=Path("results"))
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    return ap


def _spec(args) -> ExperimentSpec:
    kw = dict(out=args.out, jobs=args.jobs)
    if hasattr(args, "nodes"):
        kw.update(nodes=args.nodes, attacks=args.attack, attacker_pcts=args.attackers_pct, reps=args.reps, seed=args.seed)
        if args.scenario is not None:
            kw["overrides"] = {
                k: v for k, v in load_scenario(args.scenario).to_dict().items()
                if k not in ("node_count", "attack_kind", "attacker_fraction", "seed")
            }
    if hasattr(args, "k"):
        kw.update(Ks=args.k, alphas=args.alpha, gamma=args.gamma)
    return ExperimentSpec(**kw)


def _print_tables(tables) -> None:
    for tag, cells in tables.items():
        print(f"== {tag}")
        print(render_table(cells))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "critical-values":
            kw = {k: v for k, v in (("mc_paths", args.paths), ("grid", args.grid)) if v is not None}
            table = CriticalValueTable(**kw).fill(args.alpha, args.gamma)
            path = args.out / "critical_values.csv"
            table.save(path)
            print(path)
            return 0
        spec = _spec(args)
        if args.command == "simulate":
            stems = run_simulate(spec)
            print(f"{len(stems)} replications written to {spec.traces_dir}")
        elif args.command == "detect":
            paths = run_detect(spec)
            print(f"{len(paths)} event logs written to {spec.events_dir}")
        elif args.command == "evaluate":
            _print_tables(run_evaluate(spec))
        elif args.command == "sweep":
            _print_tables(run_sweep(spec))
    except (CusumError, ValueError, OSError, KeyError) as exc:
        _fail(type(exc).__name__, str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
