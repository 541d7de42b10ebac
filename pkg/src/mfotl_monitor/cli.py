"""Command-line front end: ``check``, ``monitor`` and ``verify``."""

from __future__ import annotations

import argparse
import contextlib
import sys
from typing import Iterable, Optional, Sequence, TextIO

from .formula import future_bounded
from .monitor import MonitorState, UnboundedFuture, minit, mstep_tables
from .oracle import Oracle, UnsafeFormula
from .safety import issafe, safe_formula, ssfv
from .syntax import (
    FormulaSyntaxError,
    LogParseError,
    format_formula,
    format_value,
    parse_formula_with_names,
    parse_log,
)
from .trace import MonotonicityViolation, TracePrefix

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2


def _cell_key(c):
    if c is None:
        return (0, 0, "")
    if isinstance(c, str):
        return (2, 0, c)
    return (1, c, "")


def sort_rows(rows: Iterable[tuple]) -> list[tuple]:
    return sorted(rows, key=lambda v: [_cell_key(c) for c in v])


def format_row(v: tuple) -> str:
    return "(" + ",".join("*" if c is None else format_value(c) for c in v) + ")"


def format_satisfactions(i: int, ts: int, R) -> list[str]:
    return [f"@{ts} (time point {i}): {format_row(v)}" for v in sort_rows(R)]


def _family(fam, names: Sequence[str]) -> str:
    sets = sorted((sorted(S) for S in fam), key=lambda s: (len(s), s))
    inner = ", ".join("{" + ", ".join(names[x] for x in s) + "}" for s in sets)
    return "{" + inner + "}"


def cmd_check(args, out: TextIO) -> int:
    f, names = parse_formula_with_names(args.formula, sugar=not args.no_sugar)
    safe = issafe(f)
    print(f"formula: {format_formula(f, names)}", file=out)
    print(f"issafe: {str(safe).lower()}", file=out)
    print(f"ssfv: {_family(ssfv(f), names)}", file=out)
    print(f"safe_formula: {str(safe_formula(f)).lower()}", file=out)
    print(f"future_bounded: {str(future_bounded(f)).lower()}", file=out)
    return EXIT_OK if safe else EXIT_ERROR


def _open_log(path: Optional[str]):
    if path is None or path == "-":
        return contextlib.nullcontext(sys.stdin)
    return open(path, encoding="utf-8")


def _monitor(f, lines, emit) -> tuple[TracePrefix, dict[int, frozenset]]:
    st: MonitorState = minit(f)
    prefix = TracePrefix()
    tables: dict[int, frozenset] = {}
    for db, ts in parse_log(lines):
        prefix = prefix.append(db, ts)
        res, st = mstep_tables(db, ts, st)
        for i, R in res:
            tables[i] = R
            emit(i, prefix.tau(i), R)
    return prefix, tables


def cmd_monitor(args, out: TextIO) -> int:
    f, _ = parse_formula_with_names(args.formula, sugar=not args.no_sugar)

    def emit(i, ts, R):
        for line in format_satisfactions(i, ts, R):
            print(line, file=out)
        out.flush()

    with _open_log(args.log) as fh:
        _monitor(f, fh, emit)
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    f, _ = parse_formula_with_names(args.formula, sugar=not args.no_sugar)
    with _open_log(args.log) as fh:
        prefix, tables = _monitor(f, fh, lambda *a: None)
    oracle = Oracle(prefix, f)
    bad = 0
    for i in sorted(tables):
        expected = oracle.sats_table(i)
        if expected != tables[i]:
            bad += 1
            print(f"mismatch at time point {i}:", file=out)
            print(f"  monitor: {sorted(map(format_row, tables[i]))}", file=out)
            print(f"  oracle:  {sorted(map(format_row, expected))}", file=out)
    if bad:
        print(f"{bad} of {len(tables)} time-points differ", file=out)
        return EXIT_MISMATCH
    print(f"{len(tables)} time-points verified", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mfotl-monitor",
        description="Monitor metric first-order temporal properties over event logs.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, log: bool):
        sp.add_argument("-f", "--formula", required=True, help="formula text")
        if log:
            sp.add_argument("-l", "--log", help="event log (default: stdin)")
        sp.add_argument("--no-sugar", action="store_true", help="accept core syntax only")
        sp.add_argument("-o", "--output", help="write output to this file")

    common(sub.add_parser("check", help="report safety of a formula"), log=False)
    common(sub.add_parser("monitor", help="stream satisfactions over a log"), log=True)
    common(sub.add_parser("verify", help="compare the monitor with the reference semantics"), log=True)
    return p


COMMANDS = {"check": cmd_check, "monitor": cmd_monitor, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with contextlib.ExitStack() as stack:
            if args.output:
                out = stack.enter_context(open(args.output, "w", encoding="utf-8"))
            else:
                out = sys.stdout
            return COMMANDS[args.command](args, out)
    except (FormulaSyntaxError, LogParseError, MonotonicityViolation) as e:
        print(f"error: {e}", file=sys.stderr)
    except UnsafeFormula as e:
        print(f"error: unsafe formula: {e}", file=sys.stderr)
    except UnboundedFuture as e:
        print(f"error: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
