"""Command-line entry point: ``rswe run`` and ``rswe converge``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from rswe_sbp.config import load_config
from rswe_sbp.driver import convergence_study, run, write_convergence
from rswe_sbp.errors import ConfigError, NumericalError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("rswe_sbp")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="key = value configuration file")
    p.add_argument("--model", help="linear or nonlinear")
    p.add_argument("--scenario", help="mms or gaussian")
    p.add_argument("--mesh", help="cartesian, seashell or cubedsphere")
    p.add_argument("--n", help="grid points per axis")
    p.add_argument("--bc", help="BC family, or inflow/outflow pair, on every edge")
    p.add_argument("--tfinal", dest="t_final", help="final time")
    p.add_argument("--cfl", help="CFL number")
    p.add_argument("--out", help="output directory")
    p.add_argument("--set", dest="extra", action="append", default=[], metavar="KEY=VALUE",
                   help="override any config key (repeatable)")
    p.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rswe", description="SBP-SAT rotating shallow water solver")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one simulation")
    _common(p_run)
    p_conv = sub.add_parser("converge", help="MMS convergence study")
    _common(p_conv)
    p_conv.add_argument("--resolutions", help="comma-separated resolutions, e.g. 21,41,81,161")
    return parser


def _overrides(args) -> dict:
    keys = ("model", "scenario", "mesh", "n", "bc", "t_final", "cfl", "out", "resolutions")
    out = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    for item in args.extra:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config, _overrides(args))
        if args.command == "run":
            result = run(cfg)
            for path in result.files:
                print(path)
            if result.error is not None:
                print(f"l2 error at t={result.t:g}: {result.error:.6e}")
        else:
            rows = convergence_study(cfg, cfg.resolution_list())
            out = Path(cfg.out)
            out.mkdir(parents=True, exist_ok=True)
            path = out / "convergence.txt"
            write_convergence(path, cfg, rows)
            for n, dx, err, rate in rows:
                print(f"{n:5d} {dx:.6e} {err:.6e} {'-' if rate is None else f'{rate:.3f}'}")
            print(path)
    except ConfigError as exc:
        print(f"rswe: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"rswe: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
