#!/usr/bin/env python3
"""Time the analysis of one large function built from nested counted loops."""

import argparse
import time

from cfgrange.analysis import value_analysis
from cfgrange.gen import nested_loops


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 2500, 5000, 10000])
    ap.add_argument("--depth", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'nodes':>8} {'seconds':>8}  status")
    for size in args.sizes:
        prog = nested_loops(size, depth=args.depth)
        start = time.perf_counter()
        result = value_analysis(prog)
        elapsed = time.perf_counter() - start
        status = "fallback" if result.fallbacks else "checked"
        print(f"{size:>8} {elapsed:>8.2f}  {status}")


if __name__ == "__main__":
    main()
