"""Numerical expressions and non-relational abstract environments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Set, Union

from . import machine_int as mi
from .domain import BOT, ReducedMap
from .intervals import NumDom, SignFlag
from .machine_int import BinOp, UnOp, Word

NTRUE: Word = 1
NFALSE: Word = 0


@dataclass(frozen=True)
class NEvar:
    name: str


@dataclass(frozen=True)
class NEconst:
    value: Word


@dataclass(frozen=True)
class NEunop:
    op: UnOp
    arg: "NExpr"


@dataclass(frozen=True)
class NEbop:
    op: BinOp
    left: "NExpr"
    right: "NExpr"


@dataclass(frozen=True)
class NEcond:
    guard: "NExpr"
    ifso: "NExpr"
    ifnot: "NExpr"


NExpr = Union[NEvar, NEconst, NEunop, NEbop, NEcond]


def nexpr_vars(e: NExpr) -> Set[str]:
    if isinstance(e, NEvar):
        return {e.name}
    if isinstance(e, NEconst):
        return set()
    if isinstance(e, NEunop):
        return nexpr_vars(e.arg)
    if isinstance(e, NEbop):
        return nexpr_vars(e.left) | nexpr_vars(e.right)
    return nexpr_vars(e.guard) | nexpr_vars(e.ifso) | nexpr_vars(e.ifnot)


def eval_nexpr(rho: Mapping[str, Word], e: NExpr) -> Optional[Word]:
    """Value of ``e`` under ``rho``; None where the result is undefined."""
    if isinstance(e, NEvar):
        return rho[e.name]
    if isinstance(e, NEconst):
        return e.value
    if isinstance(e, NEunop):
        v = eval_nexpr(rho, e.arg)
        return None if v is None else mi.arith_unop(e.op, v)
    if isinstance(e, NEbop):
        a = eval_nexpr(rho, e.left)
        b = eval_nexpr(rho, e.right)
        if a is None or b is None:
            return None
        try:
            return mi.arith(e.op, a, b)
        except mi.ArithError:
            return None
    g = eval_nexpr(rho, e.guard)
    if g is None:
        return None
    return eval_nexpr(rho, e.ifso if g else e.ifnot)


class NonRelEnv:
    """Environment abstraction ``var -> value`` built over a numerical domain.

    Environments are ``BOT`` or dicts; an unbound variable reads as top.
    """

    def __init__(self, num: NumDom, max_assume_passes: int = 16):
        self.num = num
        self.adom = ReducedMap(num)
        self.top = self.adom.top
        self.max_assume_passes = max_assume_passes

    # lattice, delegated to the reduced map
    def le(self, a, b):
        return self.adom.le(a, b)

    def join(self, a, b):
        return self.adom.join(a, b)

    def widen(self, a, b):
        return self.adom.widen(a, b)

    def gamma(self, a, rho):
        return self.adom.gamma(a, rho)

    def meet(self, a, b):
        if a is BOT or b is BOT:
            return BOT
        out = dict(a)
        for k, v in b.items():
            if k in out:
                m = self.num.meet(out[k], v)
                if m is BOT:
                    return BOT
                out[k] = m
            else:
                out[k] = v
        return out

    def get(self, ab, x):
        return self.adom.get(ab, x)

    def forget(self, x, ab):
        return self.adom.forget(ab, x)

    # -- evaluation
    def forward_eval(self, e: NExpr, ab):
        if ab is BOT:
            return BOT
        num = self.num
        if isinstance(e, NEvar):
            return ab.get(e.name, num.top)
        if isinstance(e, NEconst):
            return num.const(e.value)
        if isinstance(e, NEunop):
            x = self.forward_eval(e.arg, ab)
            return BOT if x is BOT else num.forward_unop(e.op, x)
        if isinstance(e, NEbop):
            x = self.forward_eval(e.left, ab)
            if x is BOT:
                return BOT
            y = self.forward_eval(e.right, ab)
            if y is BOT:
                return BOT
            return num.forward_binop(e.op, x, y)
        g = self.forward_eval(e.guard, ab)
        if g is BOT:
            return BOT
        may_true = num.forward_unop(UnOp.BOOLVAL, g)
        tv = num.const(NTRUE)
        fv = num.const(NFALSE)
        a = self.forward_eval(e.ifso, ab) if num.meet(may_true, tv) is not BOT else BOT
        b = self.forward_eval(e.ifnot, ab) if num.meet(may_true, fv) is not BOT else BOT
        if a is BOT:
            return b
        if b is BOT:
            return a
        return num.join(a, b)

    def backward_expr(self, e: NExpr, ab, expected):
        """Refine ``ab`` assuming ``e`` evaluates to a value in ``expected``."""
        if ab is BOT or expected is BOT:
            return BOT
        num = self.num
        if isinstance(e, NEvar):
            return self.adom.set(ab, e.name, num.meet(ab.get(e.name, num.top), expected))
        if isinstance(e, NEconst):
            return ab if num.meet(num.const(e.value), expected) is not BOT else BOT
        if isinstance(e, NEunop):
            x = self.forward_eval(e.arg, ab)
            if x is BOT:
                return BOT
            return self.backward_expr(e.arg, ab, num.backward_unop(e.op, x, expected))
        if isinstance(e, NEbop):
            x = self.forward_eval(e.left, ab)
            y = self.forward_eval(e.right, ab)
            if x is BOT or y is BOT:
                return BOT
            x2, y2 = num.backward_binop(e.op, x, y, expected)
            # right operand first, then left
            ab = self.backward_expr(e.right, ab, y2)
            return self.backward_expr(e.left, ab, x2)
        # NEcond: the false-guard scenario joined with the true-guard scenario
        b, l, r = e.guard, e.ifso, e.ifnot
        false_case = self.backward_expr(b, self.backward_expr(r, ab, expected),
                                        num.const(NFALSE))
        g = self.forward_eval(b, ab)
        truthy = BOT if g is BOT else num.backward_unop(UnOp.BOOLVAL, g, num.const(NTRUE))
        true_case = self.backward_expr(b, self.backward_expr(l, ab, expected), truthy)
        return self.adom.join(false_case, true_case)

    # -- the environment interface
    def range(self, e: NExpr, ab, flag: SignFlag):
        v = self.forward_eval(e, ab)
        return BOT if v is BOT else self.num.range(v, flag)

    def assign(self, x: str, e: NExpr, ab):
        return self.adom.set(ab, x, self.forward_eval(e, ab))

    def assume(self, e: NExpr, ab, max_passes: Optional[int] = None):
        """Refine ``ab`` assuming ``e`` evaluates to true (the word 1).

        The backward pass is repeated while it keeps shrinking the
        environment, at most ``2 * |vars(e)|`` times (capped).
        """
        if max_passes is None:
            max_passes = max(1, min(2 * len(nexpr_vars(e)), self.max_assume_passes))
        target = self.num.const(NTRUE)
        for _ in range(max_passes):
            new = self.backward_expr(e, ab, target)
            if new is BOT or new == ab:
                return new
            ab = new
        return ab
