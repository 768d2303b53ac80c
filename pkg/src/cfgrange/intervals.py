"""Signed and unsigned interval abstractions of machine integers.

Both instances share one implementation, :class:`ItvDomain`, parameterized by
the reading (:class:`SignFlag`) their bounds refer to.  An operator whose
meaning depends on signedness (``/``, ``>>``, ``<``, and their ``u``
variants) converts its operands to the reading it needs, computes there,
and converts the result back.  Possible overflow is never tracked: bounds
that leave the representable range fall back to top.

:class:`ReducedProduct` pairs two numerical domains and runs every operator
on both sides before handing the pair to a reduction operator.
:func:`signed_unsigned_reduction` is the reduction used for the
signed × unsigned pair.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable, NamedTuple, Optional, Tuple

from . import machine_int as mi
from .domain import BOT, AbstractDomain
from .machine_int import (HALF, MAX_SIGNED, MAX_UNSIGNED, MIN_SIGNED, MODULUS,
                          BinOp, Cmp, UnOp, Word)


class SignFlag(str, Enum):
    SIGNED = "signed"
    UNSIGNED = "unsigned"


SIGNED = SignFlag.SIGNED
UNSIGNED = SignFlag.UNSIGNED

BOUNDS = {SIGNED: (MIN_SIGNED, MAX_SIGNED), UNSIGNED: (0, MAX_UNSIGNED)}


class Itv(NamedTuple):
    lo: int
    hi: int

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"

    def size(self) -> int:
        return self.hi - self.lo + 1


S_TOP = Itv(MIN_SIGNED, MAX_SIGNED)
U_TOP = Itv(0, MAX_UNSIGNED)
TOPS = {SIGNED: S_TOP, UNSIGNED: U_TOP}

# consistency hook for the canonical-form invariant; tests may switch it on
CHECK_CANONICAL = False


def view(w: Word, flag: SignFlag) -> int:
    return mi.signed(w) if flag is SIGNED else w


def reduce(lo: int, hi: int):
    """The canonical lifted interval: ``BOT`` when empty."""
    if lo <= hi:
        return Itv(lo, hi)
    return BOT


def meet_itv(a, b):
    if a is BOT or b is BOT:
        return BOT
    return reduce(max(a.lo, b.lo), min(a.hi, b.hi))


def convert(x: Itv, src: SignFlag, dst: SignFlag) -> Itv:
    """Smallest interval in reading ``dst`` covering the words that ``x`` covers in ``src``."""
    if src is dst:
        return x
    if src is SIGNED:
        if x.lo >= 0:
            return x
        if x.hi < 0:
            return Itv(x.lo + MODULUS, x.hi + MODULUS)
        return U_TOP
    if x.hi <= MAX_SIGNED:
        return x
    if x.lo >= HALF:
        return Itv(x.lo - MODULUS, x.hi - MODULUS)
    return S_TOP


def convert_lifted(x, src: SignFlag, dst: SignFlag):
    return BOT if x is BOT else convert(x, src, dst)


def bounded_size(x) -> int:
    return 0 if x is BOT else x.size()


def _corners(f: Callable[[int, int], int], x: Itv, y: Itv) -> Tuple[int, int]:
    vals = (f(x.lo, y.lo), f(x.lo, y.hi), f(x.hi, y.lo), f(x.hi, y.hi))
    return min(vals), max(vals)


def _quot(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def _sext(v: int, bits: int) -> int:
    sign = 1 << (bits - 1)
    return ((v & ((1 << bits) - 1)) ^ sign) - sign


def _cmp_result(rel: Cmp, x: Itv, y: Itv) -> Itv:
    """[1,1], [0,0] or [0,1] depending on whether ``x rel y`` is certain."""
    if rel is Cmp.GT or rel is Cmp.GE:
        rel, x, y = rel.swap(), y, x
    if rel is Cmp.LT:
        sure, never = x.hi < y.lo, x.lo >= y.hi
    elif rel is Cmp.LE:
        sure, never = x.hi <= y.lo, x.lo > y.hi
    else:
        disjoint = x.hi < y.lo or y.hi < x.lo
        single = x.lo == x.hi == y.lo == y.hi
        sure, never = (single, disjoint) if rel is Cmp.EQ else (disjoint, single)
    if sure:
        return Itv(1, 1)
    if never:
        return Itv(0, 0)
    return Itv(0, 1)


def _refine(rel: Cmp, x: Itv, y: Itv, lo: int, hi: int):
    """Both operands restricted to the pairs for which ``x rel y`` can hold."""
    if rel is Cmp.GT or rel is Cmp.GE:
        y2, x2 = _refine(rel.swap(), y, x, lo, hi)
        return x2, y2
    if rel is Cmp.LT:
        return (meet_itv(x, reduce(lo, y.hi - 1)),
                meet_itv(y, reduce(x.lo + 1, hi)))
    if rel is Cmp.LE:
        return (meet_itv(x, reduce(lo, y.hi)),
                meet_itv(y, reduce(x.lo, hi)))
    if rel is Cmp.EQ:
        m = meet_itv(x, y)
        return m, m
    return _exclude_point(x, y), _exclude_point(y, x)


def _exclude_point(x: Itv, y: Itv):
    """``x`` minus the single value of ``y``, when that keeps it an interval."""
    if y.lo != y.hi:
        return x
    p = y.lo
    if x.lo == x.hi == p:
        return BOT
    if x.lo == p:
        return Itv(p + 1, x.hi)
    if x.hi == p:
        return Itv(x.lo, p - 1)
    return x


# threshold ladder for widening, in increasing order
THRESHOLDS = (MIN_SIGNED, -(1 << 16), -1, 0, 1, 1 << 16, MAX_SIGNED, MAX_UNSIGNED)

# operators computed in a fixed reading regardless of the instance
_SIGNED_OPS = frozenset({BinOp.DIV, BinOp.MOD, BinOp.SHR,
                         BinOp.LT, BinOp.LE, BinOp.GT, BinOp.GE})
_UNSIGNED_OPS = frozenset({BinOp.DIVU, BinOp.MODU, BinOp.SHRU,
                           BinOp.LTU, BinOp.LEU, BinOp.GTU, BinOp.GEU})

_CAST_BITS = {UnOp.CAST8U: 8, UnOp.CAST8S: 8, UnOp.CAST16U: 16, UnOp.CAST16S: 16}


class NumDom(AbstractDomain):
    """Abstraction of single machine integers with forward and backward operators.

    ``forward_*`` return an over-approximation of the results (``BOT`` only
    if the inputs describe no value); ``backward_*`` shrink the operands
    given an approximation ``z`` of the result.
    """

    def meet(self, a, b):
        raise NotImplementedError

    def range(self, x, flag: SignFlag):
        raise NotImplementedError

    def const(self, w: Word):
        raise NotImplementedError

    def forward_unop(self, op: UnOp, x):
        raise NotImplementedError

    def forward_binop(self, op: BinOp, x, y):
        raise NotImplementedError

    def backward_unop(self, op: UnOp, x, z):
        return x

    def backward_binop(self, op: BinOp, x, y, z):
        return x, y


class ItvDomain(NumDom):
    """Intervals over one reading of machine integers."""

    def __init__(self, flag: SignFlag):
        self.flag = flag
        self.min, self.max = BOUNDS[flag]
        self.top = TOPS[flag]
        self.thresholds = tuple(t for t in THRESHOLDS if self.min <= t <= self.max)

    def __repr__(self) -> str:
        return f"ItvDomain({self.flag.value})"

    # -- lattice
    def le(self, a, b):
        return b.lo <= a.lo and a.hi <= b.hi

    def join(self, a, b):
        return Itv(min(a.lo, b.lo), max(a.hi, b.hi))

    def widen(self, a, b):
        lo, hi = a.lo, a.hi
        if b.lo < lo:
            lo = max((t for t in self.thresholds if t <= b.lo), default=self.min)
        if b.hi > hi:
            hi = min((t for t in self.thresholds if t >= b.hi), default=self.max)
        return Itv(lo, hi)

    def gamma(self, a, w):
        return a.lo <= view(w, self.flag) <= a.hi

    def meet(self, a, b):
        r = reduce(max(a.lo, b.lo), min(a.hi, b.hi))
        if CHECK_CANONICAL and r is not BOT:
            assert r.lo <= r.hi
        return r

    def repr(self, x: Itv) -> Itv:
        """``x`` itself if representable, else top (possible overflow)."""
        if self.min <= x.lo and x.hi <= self.max:
            return x
        return self.top

    def range(self, x, flag):
        return convert(x, self.flag, flag)

    def const(self, w):
        v = view(w, self.flag)
        return Itv(v, v)

    # -- forward operators
    def add(self, x: Itv, y: Itv) -> Itv:
        return self.repr(Itv(x.lo + y.lo, x.hi + y.hi))

    def sub(self, x: Itv, y: Itv) -> Itv:
        return self.repr(Itv(x.lo - y.hi, x.hi - y.lo))

    def neg(self, x: Itv) -> Itv:
        if self.flag is SIGNED:
            return self.repr(Itv(-x.hi, -x.lo))
        if x.hi == 0:
            return x
        if x.lo > 0:
            return Itv(MODULUS - x.hi, MODULUS - x.lo)
        return self.top

    def forward_unop(self, op, x):
        flag = self.flag
        if op is UnOp.BOOLVAL or op is UnOp.NOTBOOL:
            if x.lo == x.hi == 0:
                r = Itv(0, 0)
            elif x.lo > 0 or x.hi < 0:
                r = Itv(1, 1)
            else:
                r = Itv(0, 1)
            if op is UnOp.NOTBOOL:
                r = Itv(1 - r.hi, 1 - r.lo)
            return r
        if op is UnOp.NEGINT:
            return self.neg(x)
        if op is UnOp.NOTINT:
            if flag is SIGNED:
                return Itv(-x.hi - 1, -x.lo - 1)
            return Itv(MAX_UNSIGNED - x.hi, MAX_UNSIGNED - x.lo)
        bits = _CAST_BITS[op]
        mask = (1 << bits) - 1
        if op is UnOp.CAST8U or op is UnOp.CAST16U:
            if x.lo >> bits == x.hi >> bits:
                return Itv(x.lo & mask, x.hi & mask)
            return Itv(0, mask)
        half = 1 << (bits - 1)
        if (x.lo + half) >> bits == (x.hi + half) >> bits:
            r = Itv(_sext(x.lo, bits), _sext(x.hi, bits))
        else:
            r = Itv(-half, half - 1)
        return convert(r, SIGNED, flag)

    def forward_binop(self, op, x, y):
        flag = self.flag
        if op in _SIGNED_OPS:
            work = SIGNED
        elif op in _UNSIGNED_OPS:
            work = UNSIGNED
        else:
            work = flag
        r = _binop_in(op, convert(x, flag, work), convert(y, flag, work), work,
                      convert(y, flag, UNSIGNED))
        return convert(r, work, flag)

    # -- backward operators
    def backward_unop(self, op, x, z):
        if op is UnOp.BOOLVAL or op is UnOp.NOTBOOL:
            zero_ok = z.lo <= 0 <= z.hi
            one_ok = z.lo <= 1 <= z.hi
            if op is UnOp.NOTBOOL:
                zero_ok, one_ok = one_ok, zero_ok
            if zero_ok and one_ok:
                return x
            if zero_ok:
                return self.meet(x, Itv(0, 0))
            if one_ok:
                return _exclude_point(x, Itv(0, 0))
            return BOT
        if op is UnOp.NEGINT:
            return self.meet(x, self.neg(z))
        if op is UnOp.NOTINT:
            return self.meet(x, self.forward_unop(UnOp.NOTINT, z))
        bits = _CAST_BITS[op]
        if op is UnOp.CAST8U or op is UnOp.CAST16U:
            ident = Itv(0, (1 << bits) - 1)
        elif self.flag is SIGNED:
            ident = Itv(-(1 << (bits - 1)), (1 << (bits - 1)) - 1)
        else:
            ident = Itv(0, (1 << (bits - 1)) - 1)
        if ident.lo <= x.lo and x.hi <= ident.hi:
            return self.meet(x, z)
        return x

    def backward_binop(self, op, x, y, z):
        rel = op.relation
        if rel is not None:
            zero_ok = z.lo <= 0 <= z.hi
            one_ok = z.lo <= 1 <= z.hi
            if not zero_ok and not one_ok:
                return BOT, BOT
            if zero_ok and one_ok:
                return x, y
            if zero_ok:
                rel = rel.negate()
            if rel is Cmp.EQ or rel is Cmp.NE:
                work = self.flag
            else:
                work = UNSIGNED if op.is_unsigned_cmp else SIGNED
            lo, hi = BOUNDS[work]
            xr, yr = _refine(rel, convert(x, self.flag, work), convert(y, self.flag, work),
                             lo, hi)
            if work is self.flag:
                return xr, yr
            return (meet_itv(x, convert_lifted(xr, work, self.flag)),
                    meet_itv(y, convert_lifted(yr, work, self.flag)))
        if op is BinOp.ADD:
            # i + j = k without wrap-around whenever k - j stays representable
            return self._solve(x, z.lo - y.hi, z.hi - y.lo), self._solve(y, z.lo - x.hi, z.hi - x.lo)
        if op is BinOp.SUB:
            return self._solve(x, z.lo + y.lo, z.hi + y.hi), self._solve(y, x.lo - z.hi, x.hi - z.lo)
        return x, y

    def _solve(self, x: Itv, lo: int, hi: int):
        if self.min <= lo and hi <= self.max:
            return self.meet(x, Itv(lo, hi))
        return x


def _binop_in(op: BinOp, x: Itv, y: Itv, flag: SignFlag, yu: Itv) -> Itv:
    """Result interval of ``op`` with both operands and result in reading ``flag``.

    ``yu`` is the unsigned reading of ``y``, used for shift amounts.
    """
    lo_b, hi_b = BOUNDS[flag]
    top = TOPS[flag]

    def repr_(lo: int, hi: int) -> Itv:
        return Itv(lo, hi) if lo_b <= lo and hi <= hi_b else top

    if op is BinOp.ADD:
        return repr_(x.lo + y.lo, x.hi + y.hi)
    if op is BinOp.SUB:
        return repr_(x.lo - y.hi, x.hi - y.lo)
    if op is BinOp.MUL:
        return repr_(*_corners(lambda a, b: a * b, x, y))
    if op is BinOp.SHL or op is BinOp.SHR or op is BinOp.SHRU:
        if yu.hi >= mi.BITS:
            return top
        if op is BinOp.SHL:
            return repr_(*_corners(lambda a, k: a << k, x, yu))
        return Itv(*_corners(lambda a, k: a >> k, x, yu))
    if op is BinOp.DIV or op is BinOp.DIVU:
        if y.lo <= 0 <= y.hi:
            return top
        if op is BinOp.DIV and x.lo == MIN_SIGNED and y.lo <= -1 <= y.hi:
            return top
        return repr_(*_corners(_quot, x, y))
    if op is BinOp.MOD:
        if y.lo <= 0 <= y.hi or (x.lo == MIN_SIGNED and y.lo <= -1 <= y.hi):
            return top
        m = max(abs(y.lo), abs(y.hi)) - 1
        if x.lo >= 0:
            return Itv(0, min(x.hi, m))
        if x.hi <= 0:
            return Itv(max(x.lo, -m), 0)
        return Itv(max(x.lo, -m), min(x.hi, m))
    if op is BinOp.MODU:
        if y.lo == 0:
            return top
        if x.hi < y.lo:
            return x
        return Itv(0, min(x.hi, y.hi - 1))
    if op is BinOp.AND or op is BinOp.OR or op is BinOp.XOR:
        if x.lo == x.hi and y.lo == y.hi:
            w = mi.arith(op, mi.wrap(x.lo), mi.wrap(y.lo))
            v = view(w, flag)
            return Itv(v, v)
        if op is BinOp.AND:
            if x.lo >= 0 and y.lo >= 0:
                return Itv(0, min(x.hi, y.hi))
            if x.lo >= 0:
                return Itv(0, x.hi)
            if y.lo >= 0:
                return Itv(0, y.hi)
            return top
        if x.lo >= 0 and y.lo >= 0:
            cap = (1 << max(x.hi, y.hi).bit_length()) - 1
            if op is BinOp.OR:
                return Itv(max(x.lo, y.lo), cap)
            return Itv(0, cap)
        return top
    rel = op.relation
    if rel is not None:
        return _cmp_result(rel, x, y)
    raise ValueError(op)


# -- reduced product ---------------------------------------------------------

def signed_unsigned_reduction(a, b):
    """Exchange information between a signed and an unsigned interval.

    Whenever one side lies within a half of the word space where the two
    readings are related by a fixed shift, both sides become the
    intersection; otherwise they are left as computed.
    """
    if a is BOT or b is BOT:
        return BOT
    if a.lo >= 0:
        m = meet_itv(a, b)
        return BOT if m is BOT else (m, m)
    if b.hi <= MAX_SIGNED:
        m = meet_itv(a, b)
        return BOT if m is BOT else (m, m)
    if a.hi < 0:
        m = meet_itv(Itv(a.lo + MODULUS, a.hi + MODULUS), b)
        return BOT if m is BOT else (Itv(m.lo - MODULUS, m.hi - MODULUS), m)
    if b.lo >= HALF:
        m = meet_itv(a, Itv(b.lo - MODULUS, b.hi - MODULUS))
        return BOT if m is BOT else (m, Itv(m.lo + MODULUS, m.hi + MODULUS))
    return (a, b)


class ReducedProduct(NumDom):
    """Pairs of values of two numerical domains, kept reduced by ``rho``.

    Every operator runs on both components and the lifted results go through
    ``rho``.  Order, join and widening are componentwise and unreduced.
    """

    def __init__(self, n1: NumDom, n2: NumDom, rho):
        self.n1 = n1
        self.n2 = n2
        self.rho = rho
        self.top = (n1.top, n2.top)

    def le(self, a, b):
        return a is b or (self.n1.le(a[0], b[0]) and self.n2.le(a[1], b[1]))

    def join(self, a, b):
        if a is b:
            return a
        return (self.n1.join(a[0], b[0]), self.n2.join(a[1], b[1]))

    def widen(self, a, b):
        return (self.n1.widen(a[0], b[0]), self.n2.widen(a[1], b[1]))

    def gamma(self, a, c):
        return self.n1.gamma(a[0], c) and self.n2.gamma(a[1], c)

    def meet(self, a, b):
        return self.rho(self.n1.meet(a[0], b[0]), self.n2.meet(a[1], b[1]))

    def range(self, x, flag):
        return meet_itv(self.n1.range(x[0], flag), self.n2.range(x[1], flag))

    def const(self, w):
        return self.rho(self.n1.const(w), self.n2.const(w))

    def forward_unop(self, op, x):
        return self.rho(self.n1.forward_unop(op, x[0]), self.n2.forward_unop(op, x[1]))

    def forward_binop(self, op, x, y):
        return self.rho(self.n1.forward_binop(op, x[0], y[0]),
                        self.n2.forward_binop(op, x[1], y[1]))

    def backward_unop(self, op, x, z):
        return self.rho(self.n1.backward_unop(op, x[0], z[0]),
                        self.n2.backward_unop(op, x[1], z[1]))

    def backward_binop(self, op, x, y, z):
        x1, y1 = self.n1.backward_binop(op, x[0], y[0], z[0])
        x2, y2 = self.n2.backward_binop(op, x[1], y[1], z[1])
        return self.rho(x1, x2), self.rho(y1, y2)


SIGNED_ITV = ItvDomain(SIGNED)
UNSIGNED_ITV = ItvDomain(UNSIGNED)


def signed_unsigned_product() -> ReducedProduct:
    return ReducedProduct(SIGNED_ITV, UNSIGNED_ITV, signed_unsigned_reduction)


def backward_lt(i: Itv, j: Itv):
    """Signed ``i < j``: both operands refined, as a pair of lifted intervals."""
    return (meet_itv(i, reduce(MIN_SIGNED, j.hi - 1)),
            meet_itv(j, reduce(i.lo + 1, MAX_SIGNED)))


def is_bounded(signed_range, unsigned_range) -> bool:
    """At most 2**31 values in either reading (an unreachable point counts as bounded)."""
    if signed_range is BOT or unsigned_range is BOT:
        return True
    return min(signed_range.size(), unsigned_range.size()) <= HALF


def optional_itv(x) -> Optional[Itv]:
    return None if x is BOT else x
