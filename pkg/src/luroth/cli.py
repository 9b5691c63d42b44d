"""Command-line front end: ``luroth <command> [options]``.

Exit status is 0 on success, 1 when a check inside the command fails, and 2
on bad usage (unparsable input, invalid scheme, out-of-range parameters).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .constructions import scheme_from_dict
from .core import DomainError
from .experiments import (
    Table,
    run_cf_compare,
    run_dimension,
    run_expand,
    run_frequency,
    run_trajectory,
)
from .verify import SUITES, run_suite

PRECISION_ENV = "LUROTH_PRECISION_BITS"
DEFAULT_PRECISION = 256

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def load_scheme(text: str):
    """Scheme from inline JSON or from a path to a JSON file."""
    src = text.strip()
    if not src.startswith("{"):
        path = Path(text)
        if not path.is_file():
            raise UsageError(f"--scheme: {text!r} is neither JSON nor a file")
        src = path.read_text()
    try:
        return scheme_from_dict(json.loads(src))
    except json.JSONDecodeError as exc:
        raise UsageError(f"--scheme: invalid JSON ({exc})") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"--scheme: {exc}") from exc


def precision_bits(flag: Optional[int]) -> int:
    """Flag value, else the environment variable, else the default."""
    if flag is not None:
        bits = flag
    elif os.environ.get(PRECISION_ENV):
        try:
            bits = int(os.environ[PRECISION_ENV])
        except ValueError as exc:
            raise UsageError(f"{PRECISION_ENV} must be an integer") from exc
    else:
        bits = DEFAULT_PRECISION
    if bits < 64:
        raise UsageError("precision must be at least 64 bits")
    return bits


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {"command": table.command, "ok": table.ok, "meta": table.meta,
               "columns": table.columns, "rows": table.rows}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(row[c]) for c in table.columns])
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output here instead of stdout")

    def positive(v):
        n = int(v)
        if n < 1:
            raise argparse.ArgumentTypeError("must be >= 1")
        return n

    parser = argparse.ArgumentParser(prog="luroth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="digits, convergents and residuals of x")
    p.add_argument("x", help="p/q, decimal, sqrt(k)-m, (sqrt(k)-m)/q, phi-1 or e-m")
    p.add_argument("--depth", type=positive, default=8)
    p.add_argument("--precision-bits", type=int)

    p = sub.add_parser("trajectory", parents=[common], help="log Q_n / log a_(n+1) on a tower set")
    p.add_argument("--scheme", required=True)
    p.add_argument("--depth", type=positive, default=10)
    p.add_argument("--samples", type=positive, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision-bits", type=int)

    p = sub.add_parser("dimension", parents=[common], help="covering exponents by depth")
    p.add_argument("--scheme", required=True)
    p.add_argument("--depth", type=positive, default=8)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("frequency", parents=[common], help="digit statistics of random points")
    p.add_argument("--samples", type=positive, default=100_000)
    p.add_argument("--depth", type=positive, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision-bits", type=int)

    p = sub.add_parser("cf-compare", parents=[common], help="Lüroth vs continued-fraction errors")
    p.add_argument("x")
    p.add_argument("--depth", type=positive, default=10)
    p.add_argument("--cf-depth", type=positive)
    p.add_argument("--precision-bits", type=int)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suites")
    p.add_argument("suite", nargs="?", default="all", choices=[*SUITES, "all"])
    return parser


def _run(args) -> int:
    if args.command == "verify":
        report = run_suite(args.suite)
        _emit(json.dumps(report, indent=2, default=str) + "\n", args.out)
        return EXIT_OK if report["passed"] else EXIT_FAILED

    if args.command == "expand":
        table = run_expand(args.x, args.depth, precision_bits(args.precision_bits))
        if "note" in table.meta:
            print(table.meta["note"], file=sys.stderr)
    elif args.command == "trajectory":
        precision_bits(args.precision_bits)  # validated; digits are exact integers
        table = run_trajectory(load_scheme(args.scheme), args.depth, args.samples, args.seed)
    elif args.command == "dimension":
        if args.tol <= 0:
            raise UsageError("--tol must be positive")
        table = run_dimension(load_scheme(args.scheme), args.depth, args.tol)
    elif args.command == "frequency":
        table = run_frequency(args.samples, args.depth, args.seed,
                              precision_bits(args.precision_bits))
    else:
        table = run_cf_compare(args.x, args.depth, args.cf_depth,
                               precision_bits(args.precision_bits))
    _emit(render(table, args.format), args.out)
    return EXIT_OK if table.ok else EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _run(args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"luroth {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
