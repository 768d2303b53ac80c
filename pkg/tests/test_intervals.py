"""Interval domains: worked examples and brute-force soundness of every operator."""

import random

import pytest

from cfgrange.domain import BOT
from cfgrange.intervals import (S_TOP, SIGNED, SIGNED_ITV, U_TOP, UNSIGNED, UNSIGNED_ITV, Itv,
                                backward_lt, convert, reduce, signed_unsigned_product,
                                signed_unsigned_reduction)
from cfgrange.machine_int import HALF, MAX_SIGNED, MAX_UNSIGNED, MIN_SIGNED, BinOp, UnOp

from _ref import ref_binop, ref_unop, s32
from _slices import SLICES, members, random_itv

PROD = signed_unsigned_product()
DOMAINS = {"signed": SIGNED_ITV, "unsigned": UNSIGNED_ITV, "product": PROD}
SLICE_NAMES = sorted(SLICES)


# -- worked examples -----------------------------------------------------------

def test_reduce_and_repr():
    assert reduce(3, 3) == Itv(3, 3)
    assert reduce(4, 3) is BOT
    assert reduce(MIN_SIGNED, MAX_SIGNED) == S_TOP
    assert SIGNED_ITV.repr(Itv(0, 1)) == Itv(0, 1)
    assert SIGNED_ITV.repr(Itv(MAX_SIGNED, MAX_SIGNED + 1)) == S_TOP
    assert SIGNED_ITV.repr(S_TOP) == S_TOP


def test_gamma_examples():
    assert SIGNED_ITV.gamma(Itv(-1, -1), MAX_UNSIGNED)
    assert UNSIGNED_ITV.gamma(Itv(MAX_UNSIGNED, MAX_UNSIGNED), MAX_UNSIGNED)
    assert not SIGNED_ITV.gamma(Itv(6, 9), 5)


def test_forward_examples():
    assert SIGNED_ITV.forward_binop(BinOp.ADD, Itv(1, 2), Itv(3, 4)) == Itv(4, 6)
    assert SIGNED_ITV.forward_binop(BinOp.ADD, Itv(MAX_SIGNED - 1, MAX_SIGNED), Itv(1, 1)) == S_TOP
    assert SIGNED_ITV.forward_unop(UnOp.BOOLVAL, Itv(2, 5)) == Itv(1, 1)
    # cross-check the boolval example by brute force
    assert {ref_unop("boolval", w % 2 ** 32) for w in range(2, 6)} == {1}


def test_backward_lt_examples():
    assert backward_lt(Itv(0, 10), Itv(0, 5)) == (Itv(0, 4), Itv(1, 5))
    pairs = [(i, j) for i in range(0, 11) for j in range(0, 6) if i < j]
    assert (min(i for i, _ in pairs), max(i for i, _ in pairs)) == (0, 4)
    assert (min(j for _, j in pairs), max(j for _, j in pairs)) == (1, 5)
    assert backward_lt(S_TOP, S_TOP) == (Itv(MIN_SIGNED, MAX_SIGNED - 1),
                                         Itv(MIN_SIGNED + 1, MAX_SIGNED))
    assert backward_lt(Itv(5, 5), Itv(5, 5)) == (BOT, BOT)
    # the domain's comparison refinement agrees with the formula
    x, y = SIGNED_ITV.backward_binop(BinOp.LT, Itv(0, 10), Itv(0, 5), Itv(1, 1))
    assert (x, y) == (Itv(0, 4), Itv(1, 5))


def test_range_examples():
    assert SIGNED_ITV.range(Itv(-1, 1), UNSIGNED) == U_TOP
    assert {w % 2 ** 32 for w in (-1, 0, 1)} == {0, 1, MAX_UNSIGNED}
    assert SIGNED_ITV.range(Itv(0, 5), UNSIGNED) == Itv(0, 5)
    assert SIGNED_ITV.range(Itv(0, 5), SIGNED) == Itv(0, 5)


def test_reduction_examples():
    assert signed_unsigned_reduction(S_TOP, Itv(HALF - 1, HALF)) == (S_TOP, Itv(HALF - 1, HALF))
    assert signed_unsigned_reduction(Itv(0, 5), U_TOP) == (Itv(0, 5), Itv(0, 5))
    assert signed_unsigned_reduction(BOT, U_TOP) is BOT
    assert signed_unsigned_reduction(Itv(-3, -1), U_TOP) == (Itv(-3, -1), Itv(MAX_UNSIGNED - 2, MAX_UNSIGNED))
    assert signed_unsigned_reduction(S_TOP, Itv(HALF, HALF + 2)) == (Itv(MIN_SIGNED, MIN_SIGNED + 2), Itv(HALF, HALF + 2))
    assert signed_unsigned_reduction(Itv(-5, 5), Itv(10, 20)) is BOT


def test_product_examples():
    assert PROD.const(HALF) == (Itv(MIN_SIGNED, MIN_SIGNED), Itv(HALF, HALF))
    assert PROD.forward_binop(BinOp.ADD, PROD.top, PROD.top) == PROD.top
    assert PROD.meet((S_TOP, Itv(0, 3)), (S_TOP, Itv(5, 9))) is BOT


def test_widening_follows_threshold_ladder():
    w = SIGNED_ITV.widen
    assert w(Itv(0, 0), Itv(0, 1)) == Itv(0, 1)
    assert w(Itv(0, 1), Itv(0, 2)) == Itv(0, 65536)
    assert w(Itv(0, 65536), Itv(0, 65537)) == Itv(0, MAX_SIGNED)
    assert w(Itv(0, 5), Itv(-3, 5)) == Itv(-65536, 5)
    assert UNSIGNED_ITV.widen(Itv(0, 70000), Itv(0, 70001)) == Itv(0, MAX_SIGNED)
    assert UNSIGNED_ITV.widen(Itv(0, MAX_SIGNED), Itv(0, HALF)) == U_TOP


def test_widening_chains_are_short():
    rng = random.Random(7)
    for dom in (SIGNED_ITV, UNSIGNED_ITV):
        for _ in range(200):
            a = random_itv(rng, dom.flag, SLICES[rng.choice(SLICE_NAMES)])
            steps = 0
            while True:
                b = dom.join(a, random_itv(rng, dom.flag, SLICES[rng.choice(SLICE_NAMES)]))
                nxt = dom.widen(a, b)
                if nxt == a:
                    break
                assert dom.le(a, nxt) and dom.le(b, nxt)
                a = nxt
                steps += 1
                assert steps <= 2 * 8 + 2
                if a == dom.top:
                    break


def test_convert_is_the_smallest_cover():
    rng = random.Random(3)
    for _ in range(300):
        words = SLICES[rng.choice(SLICE_NAMES)]
        x = random_itv(rng, SIGNED, words)
        u = convert(x, SIGNED, UNSIGNED)
        inside = [w for w in words if x.lo <= s32(w) <= x.hi]
        assert all(u.lo <= w <= u.hi for w in inside)
        back = convert(u, UNSIGNED, SIGNED)
        assert all(back.lo <= s32(w) <= back.hi for w in inside)


# -- brute force ------------------------------------------------------------------

def draw(rng, name):
    words = SLICES[rng.choice(SLICE_NAMES)]
    if name == "product":
        while True:
            v = signed_unsigned_reduction(random_itv(rng, SIGNED, words),
                                          random_itv(rng, UNSIGNED, words))
            if v is not BOT:
                return v, words
    dom = DOMAINS[name]
    return random_itv(rng, dom.flag, words), words


def draw_result(rng, name, dom, r, op_is_cmp):
    """An expected-result value for backward checks."""
    choice = rng.random()
    if op_is_cmp and choice < 0.6:
        return dom.const(rng.choice((0, 1)))
    if choice < 0.8 and r is not BOT:
        return r
    v, _ = draw(rng, name)
    return v


def full_slice(name, words):
    dom = DOMAINS[name]
    if name == "product":
        s = Itv(min(map(s32, words)), max(map(s32, words)))
        return PROD.rho(s, Itv(min(words), max(words)))
    vals = [s32(w) if dom.flag is SIGNED else w for w in words]
    return Itv(min(vals), max(vals))


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", list(DOMAINS))
@pytest.mark.parametrize("op", list(BinOp), ids=lambda op: op.name)
def test_binop_forward_and_backward_sound(name, op):
    dom = DOMAINS[name]
    rng = random.Random(f"{name}/{op.name}")
    is_cmp = op.relation is not None
    cases = [draw(rng, name) + draw(rng, name) for _ in range(45)]
    # one operand spanning a whole straddling slice, the other narrow
    for sl in ("zero", "half"):
        x_full = full_slice(name, SLICES[sl])
        cases.append((x_full, SLICES[sl]) + draw(rng, name))
    for x, wx, y, wy in cases:
        xs = members(dom.gamma, x, wx)
        ys = members(dom.gamma, y, wy)
        r = dom.forward_binop(op, x, y)
        z = draw_result(rng, name, dom, r, is_cmp)
        x2, y2 = dom.backward_binop(op, x, y, z)
        for a in xs:
            for b in ys:
                v = ref_binop(op.value, a, b)
                if v is None:
                    continue
                assert r is not BOT and dom.gamma(r, v), (op, x, y, r, a, b, v)
                if dom.gamma(z, v):
                    assert x2 is not BOT and dom.gamma(x2, a), ("bwd-x", op, x, y, z, x2, a, b)
                    assert y2 is not BOT and dom.gamma(y2, b), ("bwd-y", op, x, y, z, y2, a, b)


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", list(DOMAINS))
@pytest.mark.parametrize("op", list(UnOp), ids=lambda op: op.name)
def test_unop_forward_and_backward_sound(name, op):
    dom = DOMAINS[name]
    rng = random.Random(f"{name}/{op.name}")
    cases = [draw(rng, name) for _ in range(150)]
    cases += [(full_slice(name, SLICES[sl]), SLICES[sl]) for sl in SLICE_NAMES]
    for x, wx in cases:
        r = dom.forward_unop(op, x)
        z = draw_result(rng, name, dom, r, op in (UnOp.BOOLVAL, UnOp.NOTBOOL))
        x2 = dom.backward_unop(op, x, z)
        for a in members(dom.gamma, x, wx):
            v = ref_unop(op.value, a)
            assert r is not BOT and dom.gamma(r, v), (op, x, r, a, v)
            if dom.gamma(z, v):
                assert x2 is not BOT and dom.gamma(x2, a), ("bwd", op, x, z, x2, a)


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", list(DOMAINS))
def test_const_meet_and_range_sound(name):
    dom = DOMAINS[name]
    rng = random.Random(name)
    for _ in range(150):
        (x, wx), (y, _) = draw(rng, name), draw(rng, name)
        m = dom.meet(x, y)
        for w in wx:
            both = dom.gamma(x, w) and dom.gamma(y, w)
            assert not both or (m is not BOT and dom.gamma(m, w))
            if dom.gamma(x, w):
                s, u = dom.range(x, SIGNED), dom.range(x, UNSIGNED)
                assert s.lo <= s32(w) <= s.hi and u.lo <= w <= u.hi
        c = rng.choice(wx)
        assert dom.gamma(dom.const(c), c)


@pytest.mark.criterion(6)
def test_reduction_is_exact_on_slices():
    """rho neither loses nor invents words: gamma(rho(s, u)) = gamma(s) ∩ gamma(u)."""
    rng = random.Random(11)
    for _ in range(400):
        words = SLICES[rng.choice(SLICE_NAMES)]
        s = random_itv(rng, SIGNED, words)
        u = random_itv(rng, UNSIGNED, words)
        r = signed_unsigned_reduction(s, u)
        for w in words:
            inside = s.lo <= s32(w) <= s.hi and u.lo <= w <= u.hi
            if r is BOT:
                assert not inside
            else:
                assert PROD.gamma(r, w) == inside
