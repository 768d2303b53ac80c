"""``cfgrange analyze`` command line.

Exit status: 0 success, 1 parse or semantic error, 2 a function fell back
to top, 3 the concrete oracle found a violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .analysis import check_against_oracle, format_text, report, value_analysis
from .concrete import EvalError
from .fixpoint import compute_wto, format_wto
from .ir import SemanticError, successors
from .syntax import ParseError, parse

EXIT_OK, EXIT_INPUT, EXIT_FALLBACK, EXIT_VIOLATION = 0, 1, 2, 3


def _oracle_options(items: List[str]):
    opts = {"seeds": 10, "fuel": 500}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or key not in opts:
            raise argparse.ArgumentTypeError(f"bad oracle option {item!r} (want seeds=N or fuel=N)")
        try:
            opts[key] = int(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad oracle option {item!r}") from None
    return opts


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cfgrange", description="Integer range analysis of CFG programs.")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", help="analyze a program file")
    a.add_argument("file")
    a.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
    a.add_argument("--text", action="store_true", help="print a text table")
    a.add_argument("--wto", action="store_true", help="print the iteration order of each function")
    a.add_argument("--oracle", nargs="*", metavar="KEY=N",
                   help="compare against concrete runs (seeds=N fuel=N)")
    a.add_argument("--report-nodes", choices=("all", "marked"), default="all")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            prog = parse(fh.read())
    except (ParseError, SemanticError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"{args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT

    result = value_analysis(prog)

    if args.wto:
        for name, f in prog.functions.items():
            wto = compute_wto(f.graph, lambda n, g=f.graph: successors(g[n]), f.entry)
            print(f"{name}: {format_wto(wto)}")

    doc = report(prog, result, args.report_nodes)
    if args.json == "-":
        json.dump(doc, sys.stdout, indent=2)
        print()
    elif args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
    if args.text or not (args.json or args.wto):
        sys.stdout.write(format_text(doc))

    status = EXIT_OK
    for name, why in result.fallbacks.items():
        print(f"warning: {name}: analysis fell back to top ({why})", file=sys.stderr)
        status = EXIT_FALLBACK

    if args.oracle is not None:
        try:
            opts = _oracle_options(args.oracle)
        except argparse.ArgumentTypeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        try:
            violations = check_against_oracle(prog, range(opts["seeds"]), opts["fuel"], result)
        except EvalError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        if violations:
            status = EXIT_VIOLATION
        else:
            print(f"oracle: {opts['seeds']} runs, no violation", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
