"""Generic abstract domains and the functors that combine them.

A domain object bundles the operations on its abstract values; the values
themselves are plain immutable Python data.  ``gamma`` is an executable
membership test.  Only the test suite uses it; the analysis never does.
"""

from __future__ import annotations

from typing import Any, Generic, Mapping, Tuple, TypeVar

A = TypeVar("A")
B = TypeVar("B")


class _Bot:
    __slots__ = ()

    def __repr__(self) -> str:
        return "Bot"

    def __reduce__(self):
        return "BOT"


BOT = _Bot()
"""The extra least element added by :class:`LiftBot` (``Bot`` in ``A+⊥``)."""


def is_bot(x: Any) -> bool:
    return x is BOT


class AbstractDomain(Generic[A, B]):
    """Order test, top, join, widening, and concretization.

    Laws expected of every instance (exercised by the test suite):

    * ``le(a1, a2)`` implies ``gamma(a1) ⊆ gamma(a2)``
    * every concrete value is in ``gamma(top)``
    * ``gamma(x) ∪ gamma(y) ⊆ gamma(join(x, y))``

    Nothing is asked of ``widen``: iteration results are checked afterwards.
    """

    top: A

    def le(self, a: A, b: A) -> bool:
        raise NotImplementedError

    def join(self, a: A, b: A) -> A:
        raise NotImplementedError

    def widen(self, a: A, b: A) -> A:
        return self.join(a, b)

    def gamma(self, a: A, c: B) -> bool:
        raise NotImplementedError


class Product(AbstractDomain[Tuple[Any, Any], B]):
    """Direct product; a pair concretizes to the intersection of both sides."""

    def __init__(self, d1: AbstractDomain, d2: AbstractDomain):
        self.d1 = d1
        self.d2 = d2
        self.top = (d1.top, d2.top)

    def le(self, a, b):
        return self.d1.le(a[0], b[0]) and self.d2.le(a[1], b[1])

    def join(self, a, b):
        return (self.d1.join(a[0], b[0]), self.d2.join(a[1], b[1]))

    def widen(self, a, b):
        return (self.d1.widen(a[0], b[0]), self.d2.widen(a[1], b[1]))

    def gamma(self, a, c):
        return self.d1.gamma(a[0], c) and self.d2.gamma(a[1], c)


class LiftBot(AbstractDomain[Any, B]):
    """Adds ``BOT`` below every value of ``d``; ``gamma(BOT)`` is empty."""

    def __init__(self, d: AbstractDomain):
        self.d = d
        self.top = d.top

    def le(self, a, b):
        if a is BOT:
            return True
        if b is BOT:
            return False
        return self.d.le(a, b)

    def join(self, a, b):
        if a is BOT:
            return b
        if b is BOT:
            return a
        return self.d.join(a, b)

    def widen(self, a, b):
        if a is BOT:
            return b
        if b is BOT:
            return a
        return self.d.widen(a, b)

    def gamma(self, a, c):
        return a is not BOT and self.d.gamma(a, c)


class ReducedMap(AbstractDomain[Any, Mapping]):
    """Finite maps from keys to values of ``d``, lifted with ``BOT``.

    A map is ``BOT`` or a ``dict``.  Unbound keys read as ``d.top``; binding a
    key to ``BOT`` collapses the whole map to ``BOT``.  Maps are never mutated
    in place.
    """

    def __init__(self, d: AbstractDomain):
        self.d = d
        self.top = {}

    def get(self, m, k):
        if m is BOT:
            return BOT
        return m.get(k, self.d.top)

    def set(self, m, k, v):
        if m is BOT or v is BOT:
            return BOT
        out = dict(m)
        out[k] = v
        return out

    def forget(self, m, k):
        if m is BOT or k not in m:
            return m
        out = dict(m)
        del out[k]
        return out

    def le(self, a, b):
        if a is BOT:
            return True
        if b is BOT:
            return False
        le, top = self.d.le, self.d.top
        for k, vb in b.items():
            if not le(a.get(k, top), vb):
                return False
        return True

    def join(self, a, b):
        if a is BOT:
            return b
        if b is BOT:
            return a
        if a is b:
            return a
        join = self.d.join
        if len(b) < len(a):
            a, b = b, a
        return {k: join(va, b[k]) for k, va in a.items() if k in b}

    def widen(self, a, b):
        if a is BOT:
            return b
        if b is BOT:
            return a
        widen = self.d.widen
        return {k: widen(va, b[k]) for k, va in a.items() if k in b}

    def gamma(self, m, f):
        if m is BOT:
            return False
        return all(self.d.gamma(v, f[k]) for k, v in m.items())
