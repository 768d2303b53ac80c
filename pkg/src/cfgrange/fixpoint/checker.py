"""Trusted post-fixpoint checker.

Deliberately self-contained: it relies only on the domain order ``le`` and
the transfer functions, never on the iteration strategy that produced the
candidate.
"""

from __future__ import annotations

from typing import Callable, Mapping


def check_fxp(entry, ab, graph: Mapping, transfer: Callable, init, fxp: Callable) -> bool:
    """True iff ``init ⊑ fxp(entry)`` and ``tf(fxp(pc)) ⊑ fxp(pc')`` on every edge."""
    le = ab.le
    if not le(init, fxp(entry)):
        return False
    for pc, instr in graph.items():
        here = fxp(pc)
        for succ, tf in transfer(pc, instr):
            if not le(tf(here), fxp(succ)):
                return False
    return True
