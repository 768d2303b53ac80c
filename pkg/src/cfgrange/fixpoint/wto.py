"""Weak topological ordering of a control-flow graph (Bourdoncle's recursive strategy).

The recursion of the textbook algorithm is run on an explicit stack of
generators so that long straight-line code does not hit Python's recursion
limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Sequence, Tuple, Union

NodeId = int


@dataclass(frozen=True)
class Vertex:
    node: NodeId

    def __str__(self) -> str:
        return str(self.node)


@dataclass(frozen=True)
class Component:
    head: NodeId
    body: Tuple["Element", ...]

    def __str__(self) -> str:
        inner = " ".join([str(self.head)] + [str(e) for e in self.body])
        return f"({inner})"


Element = Union[Vertex, Component]
Wto = Tuple[Element, ...]

_INF = float("inf")


def format_wto(wto: Sequence[Element]) -> str:
    return " ".join(str(e) for e in wto)


def wto_nodes(wto: Iterable[Element]) -> Iterator[NodeId]:
    for e in wto:
        if isinstance(e, Vertex):
            yield e.node
        else:
            yield e.head
            yield from wto_nodes(e.body)


def wto_heads(wto: Iterable[Element]) -> Iterator[NodeId]:
    for e in wto:
        if isinstance(e, Component):
            yield e.head
            yield from wto_heads(e.body)


def compute_wto(nodes: Iterable[NodeId], succs: Callable[[NodeId], Sequence[NodeId]],
                entry: NodeId) -> Wto:
    """WTO starting at ``entry``; nodes it cannot reach follow, ordered the same way."""
    dfn: dict = {}
    stack: List[NodeId] = []
    num = 0

    def visit(v, partition):
        nonlocal num
        stack.append(v)
        num += 1
        dfn[v] = num
        head = num
        loop = False
        for w in succs(v):
            if dfn.get(w, 0) == 0:
                m = yield ("visit", w, partition)
            else:
                m = dfn[w]
            if m <= head:
                head = m
                loop = True
        if head == dfn[v]:
            dfn[v] = _INF
            element = stack.pop()
            if loop:
                while element != v:
                    dfn[element] = 0
                    element = stack.pop()
                comp = yield ("component", v, None)
                partition.append(comp)
            else:
                partition.append(Vertex(v))
        return head

    def component(v, _unused):
        partition: List[Element] = []
        for w in succs(v):
            if dfn.get(w, 0) == 0:
                yield ("visit", w, partition)
        partition.reverse()
        return Component(v, tuple(partition))

    def order_from(root) -> List[Element]:
        part: List[Element] = []
        frames = [visit(root, part)]
        value = None
        while frames:
            try:
                kind, node, sub = frames[-1].send(value)
            except StopIteration as stop:
                frames.pop()
                value = stop.value
                continue
            frames.append(visit(node, sub) if kind == "visit" else component(node, sub))
            value = None
        part.reverse()
        return part

    top = order_from(entry)
    # nodes unreachable from the entry get orderings of their own, in node order
    for n in nodes:
        if n not in dfn:
            top.extend(order_from(n))
    return tuple(top)
