"""Command line: ``fuzzywsn run|compare|surface``.

Output goes to ``--out``, else ``$FUZZYWSN_OUT``, else ``./out``. The exit
status is 0 only when every requested file was written.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import report
from .config import ConfigError, load_config, paper_config_path
from .fuzzy import FuzzyConfigError, surface_grid
from .protocols import PROTOCOLS
from .sim import compare, deployment, simulate

OUT_ENV = "FUZZYWSN_OUT"


class CliError(Exception):
    pass


def _out_dir(arg) -> Path:
    out = Path(arg or os.environ.get(OUT_ENV) or "out")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror or exc}") from None
    if not os.access(out, os.W_OK):
        raise OSError(f"output directory {out} is not writable")
    return out


def _config(args):
    cfg = load_config(args.config or paper_config_path())
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "rounds", None) is not None:
        cfg = replace(cfg, rounds=args.rounds)
    return cfg


def cmd_run(args) -> int:
    cfg = _config(args)
    if args.protocol:
        cfg = replace(cfg, protocol=args.protocol)
    cfg.validate()
    summary = simulate(cfg, trace=args.trace)
    out = _out_dir(args.out)
    report.write_rounds(summary, out / "rounds.csv")
    report.write_summary([summary], out / "summary.csv")
    report.write_snapshot(deployment(cfg), out / "nodes.csv")
    if args.trace:
        report.write_trace(summary, out / "trace.csv")
    fnd = "none" if summary.fnd is None else summary.fnd
    print(f"{cfg.protocol} seed {cfg.seed}: FND {fnd}, {summary.final_alive} alive after {cfg.rounds} rounds")
    return 0


def _protocols(text: str) -> list[str]:
    names = [p.strip() for p in text.split(",") if p.strip()]
    bad = [p for p in names if p not in PROTOCOLS]
    if bad or not names:
        raise CliError(f"unknown protocol(s) {', '.join(bad) or '(none)'}; choose from {', '.join(PROTOCOLS)}")
    return names


def cmd_compare(args) -> int:
    protocols = _protocols(args.protocols)
    cfg = _config(args)
    result = compare(cfg, protocols, args.seeds, workers=args.workers)
    out = _out_dir(args.out)
    for (protocol, seed), summary in sorted(result.runs.items()):
        report.write_rounds(summary, out / report.run_filename(protocol, seed))
    report.write_summary([result.runs[(p, s)] for p in protocols for s in result.seeds], out / "summary.csv")
    report.write_compare(result, out / "compare.csv")
    for row in result.table():
        print(f"{row['protocol']:6s} median FND {row['median_fnd']} over {row['seeds']} seed(s)")
    return 0


def _squash(name: str) -> str:
    return name.replace("_", "").lower()


def _fixed(rb, items) -> dict[str, float]:
    """Parse ``var=value`` pins; names match ignoring case and underscores (DistBS -> dist_bs)."""
    by_key = {_squash(n): n for n in rb.variable_names}
    fixed = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise CliError(f"--fixed expects var=value, got {item!r}")
        var = by_key.get(_squash(name.strip()))
        if var is None:
            raise CliError(f"{rb.name} has no input {name!r}; inputs are {', '.join(rb.variable_names)}")
        try:
            fixed[var] = float(value)
        except ValueError:
            raise CliError(f"--fixed {name}: {value!r} is not a number") from None
    return fixed


def cmd_surface(args) -> int:
    cfg = _config(args)
    rb = cfg.election_base() if args.rulebase == "election" else cfg.relay_base()
    names, rows = surface_grid(rb, args.res, _fixed(rb, args.fixed))
    out = _out_dir(args.out)
    path = report.write_surface(rows, out / f"surface_{args.rulebase}.csv")
    print(f"wrote {len(rows)} points to {path} (x1 = {names[0]}, x2 = {names[1]})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzywsn", description="Fuzzy cluster-head election WSN simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", nargs="?", help="INI config (default: bundled paper.cfg)")
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./out)")

    run = sub.add_parser("run", help="simulate one protocol and seed")
    common(run)
    run.add_argument("--seed", type=int)
    run.add_argument("--rounds", type=int)
    run.add_argument("--protocol", choices=PROTOCOLS)
    run.add_argument("--trace", action="store_true", help="also write per-round CH/relay detail")
    run.set_defaults(func=cmd_run)

    cmp_ = sub.add_parser("compare", help="run several protocols over several seeds")
    common(cmp_)
    cmp_.add_argument("--protocols", default=",".join(PROTOCOLS))
    cmp_.add_argument("--seeds", type=int, default=20, help="number of seeds, counting up from the config seed")
    cmp_.add_argument("--seed", type=int, help="first seed")
    cmp_.add_argument("--rounds", type=int)
    cmp_.add_argument("--workers", type=int, default=1)
    cmp_.set_defaults(func=cmd_compare)

    surf = sub.add_parser("surface", help="export a rule base's output surface")
    common(surf)
    surf.add_argument("--rulebase", choices=("election", "relay"), default="election")
    surf.add_argument("--fixed", action="append", metavar="VAR=VALUE")
    surf.add_argument("--res", type=int, default=21)
    surf.set_defaults(func=cmd_surface)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FuzzyConfigError, CliError, ValueError) as exc:
        print(f"fuzzywsn: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fuzzywsn: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
