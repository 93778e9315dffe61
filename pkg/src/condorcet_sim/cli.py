"""Command line entry point: ``condorcet-sim``.

Exit status is 0 on success, 1 on usage errors (bad flags, unknown preset,
invalid or non-finite parameters) and 2 on runtime failures such as an
unwritable output directory.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import config as config_mod
from .batchorder import BatchScheme, order_tournament
from .depgraph import build_tournament, scc_decompose
from .experiments import PRESET_NAMES, make_preset, rows_csv, run_preset
from .metrics import evaluate
from .model import TRANSACTION_HEADER
from .netsim import AttackConfig, ConfigError, SimConfig, run

OUT_ENV = "CONDORCET_SIM_OUT"
DEFAULT_SCHEMES = ("ranked-pairs", "hamiltonian-weakest", "alphabetical")

log = logging.getLogger("condorcet_sim")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def _scheme_list(values) -> list:
    out = []
    for v in values or ():
        out += [s.strip() for s in v.split(",") if s.strip()]
    for s in out:
        try:
            BatchScheme.parse(s)
        except ValueError as exc:
            raise UsageError(str(exc))
    return out


def default_out() -> Path:
    return Path(os.environ.get(OUT_ENV, "condorcet-out"))


def run_single(cfg: SimConfig, out_dir, schemes=DEFAULT_SCHEMES) -> list:
    """Simulate one config and dump transactions, orderings, deliveries, DOT and final orders."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run(cfg)
    tournament = build_tournament(result.used_orderings())
    cond = scc_decompose(tournament)
    written = []

    def write(name, text):
        path = out / name
        path.write_text(text)
        written.append(path)

    write("transactions.csv", "\n".join([TRANSACTION_HEADER] + [tx.to_record() for tx in result.registry]) + "\n")
    lines = ["node,position,tx"]
    for o in result.orderings:
        lines += [f"{o.node},{i},{tid}" for i, tid in enumerate(o.sequence)]
    write("orderings.csv", "\n".join(lines) + "\n")
    write("delivery.csv", result.delivery_csv())
    write("tournament.dot", tournament.to_dot(result.adversarial_ids, labels=result.labels))
    registry = result.by_id
    for scheme in schemes:
        final = order_tournament(tournament, scheme, registry, cond)
        write(f"final_{scheme.replace(':', '_')}.txt", "\n".join(final) + "\n")
    write("metrics.csv", rows_csv(evaluate(result, schemes)))
    write("config.ini", config_mod.dump(cfg))
    return written


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="condorcet-sim", description="Condorcet attack simulator for batch-order-fair ordering.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="list experiment presets")

    pp = sub.add_parser("preset", help="run an experiment preset sweep")
    pp.add_argument("name", choices=PRESET_NAMES)
    pp.add_argument("--seed", type=int, default=0)
    pp.add_argument("--out", type=Path, default=None, help=f"output directory (default ${OUT_ENV} or ./condorcet-out)")
    pp.add_argument("--trials", type=int, default=None, help="trials per grid point")
    pp.add_argument("--points-per-decade", type=int, default=20)
    pp.add_argument("--n", type=str, default="21,101", help="comma separated committee sizes")
    pp.add_argument("--no-plot", action="store_true")

    sp = sub.add_parser("single", help="run one simulation and dump its artifacts")
    sp.add_argument("--config", type=Path, help="INI config file; flags override its values")
    sp.add_argument("--n", type=int, help="committee size")
    sp.add_argument("--r", type=_finite, help="external network ratio (mean client->node latency)")
    sp.add_argument("--r-internal", type=_finite, help="internal ratio (mean gossip latency)")
    sp.add_argument("--p", type=_finite, help="adjacent swap probability within a burst")
    sp.add_argument("--tau", type=_finite, help="attack pause time")
    sp.add_argument("--honest", type=int, help="number of honest transactions")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--attack", choices=("two_tx", "four_tx", "none"))
    sp.add_argument("--clones", type=int, help="copies of each attack transaction")
    sp.add_argument("--gap", type=_finite, help="spacing between sends in one burst")
    sp.add_argument("--broadcast", action=argparse.BooleanOptionalAction, default=None, help="gossip received txs to peers")
    sp.add_argument("--scheme", "--schemes", dest="schemes", action="append",
                    help="batch scheme(s), comma separated or repeated")
    sp.add_argument("--out", type=Path, default=None)
    return p


def _single_config(args) -> tuple:
    cfg, output = SimConfig(), {}
    if args.config is not None:
        try:
            cfg, output = config_mod.load_file(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}")
    updates = {}
    for flag, field_name in (("n", "n"), ("r", "r"), ("r_internal", "r_internal"), ("p", "reorder_p"),
                             ("honest", "honest_count"), ("seed", "seed"), ("broadcast", "broadcast")):
        value = getattr(args, flag)
        if value is not None:
            updates[field_name] = value
    cfg = replace(cfg, **updates)
    if args.attack == "none":
        cfg = replace(cfg, attack=None)
    elif args.attack or args.tau is not None or args.clones is not None or args.gap is not None:
        attack = cfg.attack or AttackConfig()
        a_up = {}
        if args.attack:
            a_up["kind"] = args.attack
        if args.tau is not None:
            a_up["pause"] = args.tau
        if args.clones is not None:
            a_up["clones"] = args.clones
        if args.gap is not None:
            a_up["gap"] = args.gap
        cfg = replace(cfg, attack=replace(attack, **a_up))
    schemes = _scheme_list(args.schemes) if args.schemes else _scheme_list([output.get("schemes", "")]) or list(DEFAULT_SCHEMES)
    out = args.out or (Path(output["out"]) if "out" in output else default_out())
    cfg.validate()
    return cfg, schemes, out


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "list":
            for name in PRESET_NAMES:
                print(name)
            return 0
        if args.command == "preset":
            try:
                ns = [int(x) for x in args.n.split(",") if x.strip()]
            except ValueError:
                raise UsageError(f"bad --n value {args.n!r}")
            if not ns or min(ns) < 4:
                raise UsageError("committee sizes must be >= 4")
            if args.trials is not None and args.trials < 1:
                raise UsageError("--trials must be >= 1")
            if args.points_per_decade < 1:
                raise UsageError("--points-per-decade must be >= 1")
            preset = make_preset(args.name, args.trials, args.points_per_decade, ns)
            paths = run_preset(preset, args.seed, args.out or default_out(), plot=not args.no_plot)
        else:
            cfg, schemes, out = _single_config(args)
            paths = run_single(cfg, out, schemes)
    except (UsageError, ConfigError) as exc:
        print(f"condorcet-sim: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"condorcet-sim: runtime error: {exc}", file=sys.stderr)
        return 2
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
