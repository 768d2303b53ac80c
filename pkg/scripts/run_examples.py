#!/usr/bin/env python3
"""Analyze every program under programs/ and print the ranges at its marked nodes."""

import pathlib

from cfgrange.analysis import format_text, report, value_analysis
from cfgrange.syntax import parse

PROGRAMS = pathlib.Path(__file__).resolve().parent.parent / "programs"


def main():
    for path in sorted(PROGRAMS.glob("*.cfg")):
        prog = parse(path.read_text())
        print(f"== {path.name}")
        print(format_text(report(prog, value_analysis(prog), "marked")))


if __name__ == "__main__":
    main()
