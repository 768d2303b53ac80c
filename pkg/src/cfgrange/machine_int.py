"""32-bit machine integers.

A machine integer is carried around as a plain Python ``int`` holding its
canonical unsigned representative (``0 <= w < 2**32``).  The two readings of
a word are given by :func:`signed` and :func:`unsigned`; every operator of the
IL is defined here once and shared by the concrete interpreter and the
abstract transfer functions.
"""

from __future__ import annotations

from enum import Enum
from typing import Optional

BITS = 32
MODULUS = 1 << BITS
HALF = 1 << (BITS - 1)

MAX_UNSIGNED = MODULUS - 1
MAX_SIGNED = HALF - 1
MIN_SIGNED = -HALF

# alias used in signatures; values are always canonical words
Word = int


class ArithError(ArithmeticError):
    """An operation whose result is undefined (division by zero, overflow, bad shift)."""


def wrap(z: int) -> Word:
    """The word congruent to ``z`` modulo 2**32."""
    return z & MAX_UNSIGNED


def unsigned(w: Word) -> int:
    return w


def signed(w: Word) -> int:
    return w - MODULUS if w >= HALF else w


class Cmp(str, Enum):
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "=="
    NE = "!="

    def negate(self) -> "Cmp":
        return _NEGATE[self]

    def swap(self) -> "Cmp":
        return _SWAP[self]

    def holds(self, a: int, b: int) -> bool:
        if self is Cmp.LT:
            return a < b
        if self is Cmp.LE:
            return a <= b
        if self is Cmp.GT:
            return a > b
        if self is Cmp.GE:
            return a >= b
        if self is Cmp.EQ:
            return a == b
        return a != b


_NEGATE = {Cmp.LT: Cmp.GE, Cmp.LE: Cmp.GT, Cmp.GT: Cmp.LE, Cmp.GE: Cmp.LT,
           Cmp.EQ: Cmp.NE, Cmp.NE: Cmp.EQ}
_SWAP = {Cmp.LT: Cmp.GT, Cmp.LE: Cmp.GE, Cmp.GT: Cmp.LT, Cmp.GE: Cmp.LE,
         Cmp.EQ: Cmp.EQ, Cmp.NE: Cmp.NE}


class UnOp(str, Enum):
    CAST8U = "cast8unsigned"
    CAST8S = "cast8signed"
    CAST16U = "cast16unsigned"
    CAST16S = "cast16signed"
    BOOLVAL = "boolval"
    NEGINT = "negint"
    NOTBOOL = "notbool"
    NOTINT = "notint"


class BinOp(str, Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    MOD = "%"
    DIVU = "/u"
    MODU = "%u"
    SHL = "<<"
    SHR = ">>"
    SHRU = ">>u"
    AND = "&"
    OR = "|"
    XOR = "^"
    # cmp(b)
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "=="
    NE = "!="
    # cmpu(b)
    LTU = "<u"
    LEU = "<=u"
    GTU = ">u"
    GEU = ">=u"
    EQU = "==u"
    NEU = "!=u"

    @property
    def relation(self) -> Optional[Cmp]:
        """The comparison tested by this operator, or None for arithmetic."""
        return _RELATION.get(self)

    @property
    def is_unsigned_cmp(self) -> bool:
        return self in _UNSIGNED_CMPS

    @staticmethod
    def cmp(b: Cmp) -> "BinOp":
        return BinOp(b.value)

    @staticmethod
    def cmpu(b: Cmp) -> "BinOp":
        return BinOp(b.value + "u")


_RELATION = {}
for _b in Cmp:
    _RELATION[BinOp(_b.value)] = _b
    _RELATION[BinOp(_b.value + "u")] = _b
_UNSIGNED_CMPS = frozenset(BinOp(b.value + "u") for b in Cmp)


def _sext(w: Word, bits: int) -> int:
    sign = 1 << (bits - 1)
    return ((w & ((1 << bits) - 1)) ^ sign) - sign


def _quot(a: int, b: int) -> int:
    """Division truncating toward zero, as in C."""
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def arith_unop(op: UnOp, a: Word) -> Word:
    if op is UnOp.CAST8U:
        return a & 0xFF
    if op is UnOp.CAST8S:
        return wrap(_sext(a, 8))
    if op is UnOp.CAST16U:
        return a & 0xFFFF
    if op is UnOp.CAST16S:
        return wrap(_sext(a, 16))
    if op is UnOp.BOOLVAL:
        return 1 if a else 0
    if op is UnOp.NEGINT:
        return wrap(-a)
    if op is UnOp.NOTBOOL:
        return 0 if a else 1
    if op is UnOp.NOTINT:
        return a ^ MAX_UNSIGNED
    raise ValueError(op)


def arith(op: BinOp, a: Word, b: Word) -> Word:
    """Apply a binary operator; raises :class:`ArithError` on undefined behavior."""
    if op is BinOp.ADD:
        return (a + b) & MAX_UNSIGNED
    if op is BinOp.SUB:
        return (a - b) & MAX_UNSIGNED
    if op is BinOp.MUL:
        return (a * b) & MAX_UNSIGNED
    if op is BinOp.DIV or op is BinOp.MOD:
        sa, sb = signed(a), signed(b)
        if sb == 0 or (sa == MIN_SIGNED and sb == -1):
            raise ArithError(f"signed {op.value} of {sa} by {sb}")
        q = _quot(sa, sb)
        return wrap(q if op is BinOp.DIV else sa - sb * q)
    if op is BinOp.DIVU or op is BinOp.MODU:
        if b == 0:
            raise ArithError(f"unsigned {op.value} by zero")
        return a // b if op is BinOp.DIVU else a % b
    if op is BinOp.SHL or op is BinOp.SHR or op is BinOp.SHRU:
        if b >= BITS:
            raise ArithError(f"shift amount {b}")
        if op is BinOp.SHL:
            return (a << b) & MAX_UNSIGNED
        if op is BinOp.SHR:
            return wrap(signed(a) >> b)
        return a >> b
    if op is BinOp.AND:
        return a & b
    if op is BinOp.OR:
        return a | b
    if op is BinOp.XOR:
        return a ^ b
    rel = _RELATION.get(op)
    if rel is None:
        raise ValueError(op)
    if op in _UNSIGNED_CMPS:
        return 1 if rel.holds(a, b) else 0
    return 1 if rel.holds(signed(a), signed(b)) else 0
