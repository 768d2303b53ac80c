#!/usr/bin/env python3
"""Analyze random programs and replay concrete runs against the inferred ranges.

Exits 1 if any concrete value escapes its range.
"""

import argparse
import sys
import time

from cfgrange.analysis import check_against_oracle, value_analysis
from cfgrange.gen import generate


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--programs", type=int, default=1000)
    ap.add_argument("--seeds", type=int, default=10, help="concrete runs per program")
    ap.add_argument("--fuel", type=int, default=500, help="steps per run")
    ap.add_argument("--first", type=int, default=0, help="first generator seed")
    args = ap.parse_args(argv)

    start = time.perf_counter()
    bad = fallbacks = 0
    for p_seed in range(args.first, args.first + args.programs):
        prog = generate(p_seed)
        result = value_analysis(prog)
        fallbacks += len(result.fallbacks)
        for v in check_against_oracle(prog, range(args.seeds), args.fuel, result):
            bad += 1
            print(f"program {p_seed}: {v}")
    elapsed = time.perf_counter() - start
    print(f"{args.programs} programs x {args.seeds} runs, fuel {args.fuel}: "
          f"{bad} violations, {fallbacks} functions fell back to top, {elapsed:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
