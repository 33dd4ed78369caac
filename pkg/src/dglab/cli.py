"""Command line entry point: ``dglab run | compare | list-scenarios``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .compare import CompareError, compare
from .config import ConfigError, load_config
from .runner import EXIT_CONFIG, run
from .scenarios import SCENARIO_NAMES, get_scenario


def _window(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("window must be 'lo,hi'") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError("window needs lo < hi")
    return lo, hi


def build_parser():
    parser = argparse.ArgumentParser(prog="dglab", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario from a JSON config")
    p_run.add_argument("config")
    p_run.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override a config entry, e.g. time.cfl=0.2")

    p_cmp = sub.add_parser("compare", help="compare two run directories")
    p_cmp.add_argument("dir_a")
    p_cmp.add_argument("dir_b")
    p_cmp.add_argument("--reference", default="exact",
                       help="'exact', a run directory or a reference CSV (default: exact)")
    p_cmp.add_argument("--window", type=_window, default=None, metavar="LO,HI",
                       help="restrict norms and jump metrics to lo <= x <= hi")
    p_cmp.add_argument("-o", "--output", help="write the report here instead of stdout")

    sub.add_parser("list-scenarios", help="list the built-in scenarios")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "list-scenarios":
        for name in SCENARIO_NAMES:
            sc = get_scenario(name)
            print(f"{name:18s} {sc.law.name:9s} I={sc.n_elements:<3d} p={sc.degree:<2d} "
                  f"t={sc.t_final:<4g} {sc.description}")
        return 0
    if args.command == "run":
        try:
            cfg = load_config(args.config, args.overrides)
        except ConfigError as err:
            print(f"config error: {err}", file=sys.stderr)
            return EXIT_CONFIG
        return run(cfg)
    try:
        report = compare(args.dir_a, args.dir_b, args.reference, args.window)
    except CompareError as err:
        print(f"compare error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(report, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
