"""Reference semantics written independently of the package, for use as test oracles.

Words are handled through ``struct`` packing and division through exact
rationals so that no helper is shared with the code under test.
"""

from __future__ import annotations

import math
import struct
from fractions import Fraction
from typing import Optional

U32 = 2 ** 32


def s32(w: int) -> int:
    return struct.unpack("<i", struct.pack("<I", w % U32))[0]


def u32(v: int) -> int:
    return v % U32


def sext(w: int, bits: int) -> int:
    fmt = {8: "<b", 16: "<h"}[bits]
    raw = struct.pack("<I", w % U32)[: bits // 8]
    return struct.unpack(fmt, raw)[0]


def ref_unop(op: str, a: int) -> int:
    if op == "cast8unsigned":
        return a % 256
    if op == "cast16unsigned":
        return a % 65536
    if op == "cast8signed":
        return u32(sext(a, 8))
    if op == "cast16signed":
        return u32(sext(a, 16))
    if op == "boolval":
        return int(a != 0)
    if op == "notbool":
        return int(a == 0)
    if op == "negint":
        return u32(-s32(a))
    if op == "notint":
        return u32(-s32(a) - 1)
    raise KeyError(op)


def ref_binop(op: str, a: int, b: int) -> Optional[int]:
    """Result word, or None where the operation is undefined."""
    sa, sb = s32(a), s32(b)
    if op == "+":
        return u32(sa + sb)
    if op == "-":
        return u32(sa - sb)
    if op == "*":
        return u32(sa * sb)
    if op in ("/", "%"):
        if sb == 0 or (sa == -2 ** 31 and sb == -1):
            return None
        q = math.trunc(Fraction(sa, sb))
        return u32(q if op == "/" else sa - q * sb)
    if op in ("/u", "%u"):
        if b == 0:
            return None
        return u32(a // b if op == "/u" else a - (a // b) * b)
    if op in ("<<", ">>", ">>u"):
        if not 0 <= b < 32:
            return None
        if op == "<<":
            return u32(a * 2 ** b)
        if op == ">>":
            return u32(math.floor(Fraction(sa, 2 ** b)))
        return a // 2 ** b
    if op in ("&", "|", "^"):
        f = {"&": lambda x, y: x & y, "|": lambda x, y: x | y, "^": lambda x, y: x ^ y}[op]
        pa, pb = struct.pack("<I", a), struct.pack("<I", b)
        return struct.unpack("<I", bytes(f(x, y) for x, y in zip(pa, pb)))[0]
    rel = op.rstrip("u") if op.endswith("u") else op
    x, y = (a, b) if op.endswith("u") else (sa, sb)
    return int({"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y,
                "==": x == y, "!=": x != y}[rel])
