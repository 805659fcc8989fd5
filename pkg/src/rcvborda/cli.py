"""Command-line entry point: ``rcvborda analyze|batch|fixtures``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import fixtures
from .ballot import BallotError, profile_to_csv
from .report import FORMATS, InvariantViolation, RunConfig, analyze, batch, emit
from .scoring import ALL_METHODS, BORDA_METHODS, TIE_BREAKS, Method

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def _add_run_flags(p: argparse.ArgumentParser):
    group = p.add_mutually_exclusive_group()
    group.add_argument("--method", action="append", choices=[m.value for m in ALL_METHODS],
                       help="method to run (repeatable); default: the five Borda variations")
    group.add_argument("--all-methods", action="store_true", help="run all seven methods")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--max-spoiler-candidates", type=int, default=10, metavar="N")
    p.add_argument("--tie-break", choices=TIE_BREAKS, default="index")
    p.add_argument("--writein-pattern", action="append", metavar="P",
                   help="name pattern treated as a write-in (repeatable, glob syntax)")
    p.add_argument("--last-place-unranked", choices=("on", "off"), default="on",
                   help="count the single unranked candidate of an n-1 ballot as last")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rcvborda", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one CVR file or bundled fixture")
    p.add_argument("path")
    _add_run_flags(p)

    p = sub.add_parser("batch", help="analyze every CVR file in a directory")
    p.add_argument("directory")
    _add_run_flags(p)
    p.add_argument("--out", type=Path)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("fixtures", help="bundled election profiles")
    fx = p.add_subparsers(dest="fixtures_command", required=True)
    fx.add_parser("list")
    ex = fx.add_parser("export", help="write each fixture as a canonical CVR CSV")
    ex.add_argument("directory", type=Path)
    return parser


def _config(args) -> RunConfig:
    if args.all_methods:
        methods = ALL_METHODS
    elif args.method:
        methods = tuple(Method.parse(m) for m in args.method)
    else:
        methods = BORDA_METHODS
    kwargs = dict(
        methods=methods,
        tie_break=args.tie_break,
        spoiler_cap=args.max_spoiler_candidates,
        unique_unranked_is_last=args.last_place_unranked == "on",
        output_format=args.format,
    )
    if args.writein_pattern:
        kwargs["writein_patterns"] = tuple(args.writein_pattern)
    return RunConfig(**kwargs)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    out = sys.stdout.buffer
    try:
        if args.command == "fixtures":
            if args.fixtures_command == "list":
                for f in fixtures.FIXTURES.values():
                    p = f.profile()
                    out.write(f"{f.name:<22} {p.n} candidates {p.total_ballots:>7} ballots  {f.title}\n".encode())
            else:
                args.directory.mkdir(parents=True, exist_ok=True)
                for f in fixtures.FIXTURES.values():
                    (args.directory / f"{f.name}.csv").write_text(profile_to_csv(f.profile()), encoding="utf-8")
            return EXIT_OK
        config = _config(args)
        if args.command == "analyze":
            out.write(emit(analyze(args.path, config), config.output_format))
            return EXIT_OK
        report = batch(args.directory, config, workers=args.workers)
        data = emit(report, config.output_format)
        if args.out:
            args.out.write_bytes(data)
        else:
            out.write(data)
        return EXIT_OK
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (BallotError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
