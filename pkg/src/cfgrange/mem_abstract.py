"""Abstraction of local environments and memory on top of a numerical environment.

A state is ``BOT`` or a :class:`MemState` pairing a numerical environment
with flow-sensitive type information that tells integers from pointers.
Variables holding a pointer are tracked through their offset, so ranges
cover both ``vint(i)`` and ``vptr(b, i)`` contents.  Memory contents are not
tracked at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional

from .concrete import UNDEF, VInt, VPtr
from .domain import BOT
from .intervals import UNSIGNED, SignFlag
from .ir import (Binop, Chunk, Cond, Const, Expr, IntConst,
                 Load, Unop, Var)
from .machine_int import BinOp, UnOp
from .num_env import NEbop, NEcond, NEconst, NExpr, NEunop, NEvar, NonRelEnv


class Kind(str, Enum):
    INT = "int"
    PTR = "ptr"
    TOP = "top"


TypeInfo = Mapping[str, Kind]  # unbound variables are Kind.TOP


def kind_join(a: Kind, b: Kind) -> Kind:
    return a if a is b else Kind.TOP


def kind_of(tp: TypeInfo, e: Expr) -> Kind:
    """What ``e`` may evaluate to: INT never yields a pointer, PTR never an integer."""
    if isinstance(e, Var):
        return tp.get(e.name, Kind.TOP)
    if isinstance(e, Const):
        return Kind.INT if isinstance(e.const, IntConst) else Kind.PTR
    if isinstance(e, Binop):
        if e.op is BinOp.ADD:
            ka, kb = kind_of(tp, e.left), kind_of(tp, e.right)
            if ka is Kind.INT and kb is Kind.INT:
                return Kind.INT
            if (ka is Kind.PTR) != (kb is Kind.PTR):
                return Kind.PTR
            return Kind.TOP
        if e.op is BinOp.SUB:
            ka, kb = kind_of(tp, e.left), kind_of(tp, e.right)
            if ka is Kind.INT:
                return Kind.INT
            if ka is Kind.PTR and kb is not Kind.PTR:
                return Kind.PTR
            return Kind.TOP
        return Kind.INT
    if isinstance(e, Cond):
        return kind_join(kind_of(tp, e.ifso), kind_of(tp, e.ifnot))
    if isinstance(e, Load):
        return Kind.TOP if e.chunk is Chunk.INT32 else Kind.INT
    return Kind.INT  # unary operators never produce pointers


def convert(tp: TypeInfo, e: Expr) -> Optional[NExpr]:
    """Numerical reading of ``e`` (pointers read as their offset), or None.

    Unsigned comparisons only convert when both operands are known to be of
    the same kind: comparing an integer with a pointer is defined (and
    false for ``==u``) although their numerical readings may coincide.
    """
    if isinstance(e, Var):
        return NEvar(e.name)
    if isinstance(e, Const):
        c = e.const
        if isinstance(c, IntConst):
            return NEconst(c.value)
        return NEconst(c.offset)
    if isinstance(e, Unop):
        a = convert(tp, e.arg)
        return None if a is None else NEunop(e.op, a)
    if isinstance(e, Binop):
        if e.op.is_unsigned_cmp:
            ka, kb = kind_of(tp, e.left), kind_of(tp, e.right)
            if ka is Kind.TOP or ka is not kb:
                return None
        a = convert(tp, e.left)
        if a is None:
            return None
        b = convert(tp, e.right)
        return None if b is None else NEbop(e.op, a, b)
    if isinstance(e, Cond):
        g = convert(tp, e.guard)
        if g is None:
            return None
        a = convert(tp, e.ifso)
        if a is None:
            return None
        b = convert(tp, e.ifnot)
        return None if b is None else NEcond(g, a, b)
    return None  # Load: memory contents are not tracked


@dataclass(frozen=True)
class MemState:
    env: dict
    types: dict


class MemDomain:
    """Abstract states over ``(env, mem)`` built from a numerical environment domain."""

    def __init__(self, numenv: NonRelEnv):
        self.numenv = numenv
        self.top = MemState(numenv.top, {})

    def make(self, env, types):
        return BOT if env is BOT else MemState(env, types)

    # -- lattice
    def le(self, a, b):
        if a is BOT:
            return True
        if b is BOT:
            return False
        if a is b:
            return True
        ta = a.types
        for x, k in b.types.items():
            if ta.get(x, Kind.TOP) is not k:
                return False
        return self.numenv.le(a.env, b.env)

    def _types_join(self, ta, tb):
        if ta is tb:
            return ta
        return {x: k for x, k in ta.items() if tb.get(x) is k}

    def join(self, a, b):
        if a is BOT:
            return b
        if b is BOT:
            return a
        if a is b:
            return a
        return MemState(self.numenv.join(a.env, b.env), self._types_join(a.types, b.types))

    def widen(self, a, b):
        if a is BOT:
            return b
        if b is BOT:
            return a
        return MemState(self.numenv.widen(a.env, b.env), self._types_join(a.types, b.types))

    def meet(self, a, b):
        if a is BOT or b is BOT:
            return BOT
        types = dict(a.types)
        for x, k in b.types.items():
            if x not in types:
                types[x] = k
            elif types[x] is not k:
                del types[x]
        return self.make(self.numenv.meet(a.env, b.env), types)

    def gamma(self, a, env, mem=None) -> bool:
        """Membership of a concrete local environment (memory is unconstrained)."""
        if a is BOT:
            return False
        num = self.numenv.num
        for x, v in env.items():
            k = a.types.get(x, Kind.TOP)
            if isinstance(v, VPtr):
                if k is Kind.INT:
                    return False
                i = v.offset
            elif isinstance(v, VInt):
                if k is Kind.PTR:
                    return False
                i = v.value
            else:
                continue
            if not num.gamma(self.numenv.get(a.env, x), i):
                return False
        # variables without a defined value still need some witness
        for x, val in a.env.items():
            if env.get(x, UNDEF) is UNDEF and _empty(num, val):
                return False
        return True

    # -- commands
    def range(self, ab, x: str, flag: SignFlag):
        if ab is BOT:
            return BOT
        return self.numenv.num.range(self.numenv.get(ab.env, x), flag)

    def forget(self, x: str, ab):
        if ab is BOT:
            return BOT
        types = ab.types
        if x in types:
            types = dict(types)
            del types[x]
        return MemState(self.numenv.forget(x, ab.env), types)

    def assign(self, x: str, e: Expr, ab):
        if ab is BOT:
            return BOT
        ne = convert(ab.types, e)
        if ne is None:
            return self.forget(x, ab)
        env = self.numenv.assign(x, ne, ab.env)
        types = dict(ab.types)
        k = kind_of(ab.types, e)
        if k is Kind.TOP:
            types.pop(x, None)
        else:
            types[x] = k
        return self.make(env, types)

    def store(self, chunk: Chunk, addr: Expr, value: Expr, ab):
        # locals never live in memory and memory contents are untracked
        return ab

    def assume(self, e: Expr, ab):
        if ab is BOT:
            return BOT
        ne = convert(ab.types, e)
        if ne is None:
            return ab
        return self.make(self.numenv.assume(NEunop(UnOp.BOOLVAL, ne), ab.env), ab.types)


def _empty(num, val) -> bool:
    """True when ``val`` admits no word at all."""
    return num.range(val, UNSIGNED) is BOT


def default_domain() -> MemDomain:
    from .intervals import signed_unsigned_product
    return MemDomain(NonRelEnv(signed_unsigned_product()))
