"""Untrusted fixpoint engine: widening/narrowing iteration along a WTO.

Nothing here needs to be correct for the analysis to be sound; whatever
:func:`iterate` returns is validated by :mod:`.checker` before use.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from ..domain import BOT
from .wto import Component, Element, Vertex, compute_wto

NodeId = int
Transfer = Callable[[NodeId, object], Sequence[Tuple[NodeId, Callable]]]

WIDENING_DELAY = 2
NARROWING_SWEEPS = 2
MAX_COMPONENT_PASSES = 1000


class IterationBudgetExceeded(RuntimeError):
    """A loop head failed to stabilize; the widening operator is at fault."""


class _Engine:
    def __init__(self, ab, graph: Mapping[NodeId, object], entry: NodeId,
                 transfer: Transfer, init, delay: int, max_passes: int):
        self.ab = ab
        self.entry = entry
        self.init = init
        self.delay = delay
        self.max_passes = max_passes
        self.preds: Dict[NodeId, List[Tuple[NodeId, Callable]]] = {n: [] for n in graph}
        self.succs: Dict[NodeId, List[NodeId]] = {}
        for n, instr in graph.items():
            out = []
            for s, tf in transfer(n, instr):
                out.append(s)
                self.preds.setdefault(s, []).append((n, tf))
            self.succs[n] = out
        self.vals: Dict[NodeId, object] = {n: BOT for n in graph}
        self.wto = compute_wto(graph, lambda n: self.succs.get(n, ()), entry)

    def incoming(self, n: NodeId):
        join = self.ab.join
        acc = self.init if n == self.entry else BOT
        vals = self.vals
        for p, tf in self.preds[n]:
            v = vals[p]
            if v is BOT:
                continue
            out = tf(v)
            if out is BOT:
                continue
            acc = out if acc is BOT else join(acc, out)
        return acc

    def run(self, elements: Sequence[Element]) -> None:
        for e in elements:
            if isinstance(e, Vertex):
                self.vals[e.node] = self.incoming(e.node)
            else:
                self.stabilize(e)

    def stabilize(self, comp: Component) -> None:
        head, ab, vals = comp.head, self.ab, self.vals
        passes = 0
        while True:
            new = self.incoming(head)
            old = vals[head]
            if passes > 0 and ab.le(new, old):
                return
            if passes >= self.max_passes:
                raise IterationBudgetExceeded(f"loop head {head} did not stabilize")
            vals[head] = ab.join(old, new) if passes < self.delay else ab.widen(old, new)
            passes += 1
            self.run(comp.body)

    def narrow(self, elements: Sequence[Element]) -> None:
        meet = getattr(self.ab, "meet", None)
        for e in elements:
            if isinstance(e, Vertex):
                nodes = [e.node]
            else:
                nodes = [e.head]
            for n in nodes:
                new = self.incoming(n)
                self.vals[n] = meet(self.vals[n], new) if meet else new
            if isinstance(e, Component):
                self.narrow(e.body)

    def is_post_fixpoint(self) -> bool:
        le = self.ab.le
        if not le(self.init, self.vals[self.entry]):
            return False
        for n, ps in self.preds.items():
            target = self.vals.get(n, BOT)
            for p, tf in ps:
                if not le(tf(self.vals[p]), target):
                    return False
        return True


def iterate(ab, graph: Mapping[NodeId, object], entry: NodeId, transfer: Transfer, init,
            *, delay: int = WIDENING_DELAY, narrowing: int = NARROWING_SWEEPS,
            max_passes: int = MAX_COMPONENT_PASSES) -> Dict[NodeId, object]:
    """Candidate post-fixpoint; unreachable nodes map to ``BOT``.

    Components are stabilized innermost first, widening at loop heads after
    ``delay`` joins; ``narrowing`` decreasing sweeps follow.  A sweep that
    breaks the post-fixpoint property is undone.
    """
    eng = _Engine(ab, graph, entry, transfer, init, delay, max_passes)
    eng.run(eng.wto)
    for _ in range(narrowing):
        saved = dict(eng.vals)
        eng.narrow(eng.wto)
        if eng.vals == saved:
            break
        if not eng.is_post_fixpoint():
            eng.vals = saved
            break
    return eng.vals
