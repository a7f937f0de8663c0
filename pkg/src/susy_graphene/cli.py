"""Command-line interface.

Exit codes: 0 success, 1 failed verification checks, 2 invalid
configuration, 3 chain construction failure (a node in a transformation
function).
"""

from __future__ import annotations

import argparse
import json
import sys

from .chain import ChainConstructionError
from .config import ConfigError, bundled_names, load_bundled, resolve_config
from .runner import compute, thread_count, verify, write_outputs

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_CHAIN = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="susy-graphene",
        description="Deformed magnetic fields, spectra and spinor observables "
                    "for graphene's Dirac electrons via iterated intertwining.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute the configured quantities and write files")
    run.add_argument("config", help="config file path or bundled config name")
    run.add_argument("--out", default=".", help="output directory (default: .)")
    run.add_argument("--format", choices=("csv", "json"), default=None,
                     help="override the config's output format")
    run.add_argument("--plot", action="store_true",
                     help="also render PNG figures next to the data files")

    ver = sub.add_parser("verify", help="run oracle and consistency checks")
    ver.add_argument("config", help="config file path or bundled config name")
    ver.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                     help="override a named check bound (repeatable)")

    sub.add_parser("examples", help="list the bundled figure configs")
    return parser


def _load(arg: str):
    try:
        return resolve_config(arg)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)
    except OSError as err:
        print(f"error: cannot read {arg}: {err}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _cmd_run(args) -> int:
    cfg = _load(args.config)
    threads = thread_count()
    try:
        result = compute(cfg, threads=threads)
    except ChainConstructionError as err:
        print(f"error: chain construction failed at level {err.level} "
              f"(epsilon={err.epsilon}, nu={err.nu}): {err}", file=sys.stderr)
        return EXIT_CHAIN
    written = write_outputs(result, args.out, fmt=args.format)
    if args.plot:
        from .plots import render
        written += render(result, args.out)
    for path in written:
        print(path)
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = _load(args.config)
    overrides = {}
    for item in args.tol:
        name, sep, value = item.partition("=")
        if not sep:
            print(f"error: --tol expects NAME=VALUE, got {item!r}", file=sys.stderr)
            return EXIT_CONFIG
        try:
            overrides[name] = float(value)
        except ValueError:
            print(f"error: --tol {name}: {value!r} is not a number", file=sys.stderr)
            return EXIT_CONFIG
    try:
        report = verify(cfg, tolerances=overrides, threads=thread_count())
    except ChainConstructionError as err:
        print(f"error: chain construction failed at level {err.level} "
              f"(epsilon={err.epsilon}, nu={err.nu}): {err}", file=sys.stderr)
        return EXIT_CHAIN
    print(json.dumps(report, indent=2, sort_keys=True))
    if report["passed"]:
        return EXIT_OK
    failing = [c["name"] for c in report["checks"] if not c["pass"]]
    print(f"failed checks: {', '.join(failing)}", file=sys.stderr)
    return EXIT_CHECKS_FAILED


def _cmd_examples() -> int:
    for name in bundled_names():
        cfg = load_bundled(name)
        print(f"{name}: {cfg.description}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_examples()
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
