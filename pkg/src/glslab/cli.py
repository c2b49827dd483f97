"""``gls-lab`` command line interface."""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .suites import SUITES, list_catalog, run_suite


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gls-lab", description="Trigonometric approximation experiments in grand Lebesgue spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", metavar="PATH", help="INI configuration file (defaults built in)")
        p.add_argument("--pmax", type=float, help="upper end of the exponent grid")
        p.add_argument("--grid-n", type=int, dest="grid_n", help="number of grid points (power of two)")

    run = sub.add_parser("run", help="run a suite and write CSV tables and summary.json")
    common(run)
    run.add_argument("--suite", default="all", choices=sorted(SUITES))
    run.add_argument("--out", metavar="DIR", help="output directory (overrides the config)")

    sub.add_parser("catalog", help="list catalog functions and their norm growth")

    check = sub.add_parser("config-check", help="validate a configuration and print its canonical form")
    common(check)
    return parser


def _config(args):
    cfg = load_config(args.config)
    return cfg.with_overrides(p_max=args.pmax, grid_size=args.grid_n).validate()


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "catalog":
        print(list_catalog())
        return 0
    try:
        cfg = _config(args)
    except ConfigError as exc:
        print(f"gls-lab: invalid configuration: {exc}", file=sys.stderr)
        return 2
    if args.command == "config-check":
        sys.stdout.write(cfg.to_ini())
        print(f"# config hash {cfg.config_hash()}")
        return 0
    bundle = run_suite(cfg, args.suite, args.out, log=print)
    failed = bundle.required_failures
    print(f"wrote {len(bundle.files)} tables and summary.json to {bundle.out_dir}")
    if failed:
        print(f"required criteria failed: {', '.join(map(str, failed))}")
    return bundle.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
