"""Command line entry point.

    slotcsp solve MODEL [--first | --all | --count] [options]
    slotcsp nqueens N   [--first | --all | --count] [options]

Exit status: 0 solved or counted, 1 no solution, 2 usage or model error.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import ExitStack

from .errors import CapacityError
from .events import TraceWriter
from .model import ModelError, build, build_nqueens, parse
from .scheduler import SCHEMES


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--first", dest="mode", action="store_const", const="first",
                      help="print the first solution (default)")
    mode.add_argument("--all", dest="mode", action="store_const", const="all",
                      help="print every solution, then the count")
    mode.add_argument("--count", dest="mode", action="store_const", const="count",
                      help="print only the number of solutions")
    common.add_argument("--scheme", choices=SCHEMES, default="constraint",
                        help="what the propagation queue holds")
    common.add_argument("--complete", action="store_true",
                        help="add hyper-arc tables to disequality constraints")
    common.add_argument("--stats", action="store_true", help="print scheduler counters on stderr")
    common.add_argument("--trace", metavar="PATH", help="write every slot delivery to PATH")

    parser = argparse.ArgumentParser(prog="slotcsp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", parents=[common], help="solve a model file")
    solve.add_argument("file")
    queens = sub.add_parser("nqueens", parents=[common], help="solve the n-queens problem")
    queens.add_argument("n", type=int)
    return parser


def _format(solution: dict[str, int]) -> str:
    return " ".join(f"{name}={value}" for name, value in solution.items())


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    mode = args.mode or "first"

    try:
        if args.command == "solve":
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
            model = build(parse(text), scheme=args.scheme, complete=args.complete)
        else:
            if args.n < 1:
                print("slotcsp: N must be positive", file=sys.stderr)
                return 2
            model = build_nqueens(args.n, scheme=args.scheme, complete=args.complete)
    except ModelError as exc:
        print(f"{args.file}:{exc.line}:{exc.col}: {type(exc).__name__}: {exc.message}",
              file=sys.stderr)
        return 2
    except (OSError, CapacityError) as exc:
        print(f"slotcsp: {exc}", file=sys.stderr)
        return 2

    with ExitStack() as stack:
        if args.trace:
            stream = stack.enter_context(open(args.trace, "w", encoding="utf-8"))
            model.bus.add_spy(TraceWriter(stream))
        count = 0
        for solution in model.solutions():
            count += 1
            if mode != "count":
                print(_format(solution))
            if mode == "first":
                break

    if count == 0:
        print("UNSAT")
    if mode != "first":
        print(f"solutions: {count}")
    if args.stats:
        print(model.scheduler.stats, file=sys.stderr)
    return 0 if count else 1
