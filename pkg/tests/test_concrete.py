import pytest

from cfgrange.concrete import (UNDEF, Block, EvalError, Finished, Machine, Stuck, VInt, VPtr,
                               eval_binop, load, run, store, trace)
from cfgrange.ir import Chunk
from cfgrange.machine_int import BinOp
from cfgrange.syntax import parse


def final(src, **args):
    return run(parse(src), {k: VInt(v % 2 ** 32) for k, v in args.items()})


def test_counted_loop_runs_to_completion():
    src = "1: i = 0 -> 2\n2: if (i < 10) -> 3, 4\n3: i = i + 1 -> 2\n4: return i"
    assert final(src) == Finished(VInt(10))
    states = trace(parse(src), {}, 1000)
    assert [s.pc for s in states[:4]] == [1, 2, 3, 2]


def test_fuel_exhaustion_reported():
    p = parse("1: skip -> 1")
    states, end = Machine(p).trace({}, 5)
    assert len(states) == 6 and end == Stuck("OutOfFuel")


def test_branch_on_undef_is_stuck():
    assert isinstance(final("1: if (y) -> 2, 2\n2: return"), Stuck)


def test_division_by_zero_is_stuck():
    assert isinstance(final("function main(a) { 1: x = 1 / a -> 2; 2: return x }", a=0), Stuck)


def test_memory_cells_need_exact_chunk_and_offset():
    mem = {1: Block(8, {})}
    mem = store(mem, Chunk.INT32, VPtr(1, 0), VInt(0x12345678))
    assert load(mem, Chunk.INT32, VPtr(1, 0)) == VInt(0x12345678)
    assert load(mem, Chunk.INT16U, VPtr(1, 0)) is UNDEF
    assert load(mem, Chunk.INT32, VPtr(1, 4)) is UNDEF
    # overlapping store invalidates the old cell
    mem = store(mem, Chunk.INT8U, VPtr(1, 2), VInt(300))
    assert load(mem, Chunk.INT32, VPtr(1, 0)) is UNDEF
    assert load(mem, Chunk.INT8U, VPtr(1, 2)) == VInt(44)


def test_small_chunks_normalize():
    mem = store({1: Block(4, {})}, Chunk.INT8S, VPtr(1, 0), VInt(0xFF))
    assert load(mem, Chunk.INT8S, VPtr(1, 0)) == VInt(2 ** 32 - 1)
    mem = store(mem, Chunk.INT16U, VPtr(1, 2), VInt(0x12345))
    assert load(mem, Chunk.INT16U, VPtr(1, 2)) == VInt(0x2345)


def test_out_of_bounds_access_fails():
    with pytest.raises(EvalError):
        store({1: Block(4, {})}, Chunk.INT32, VPtr(1, 2), VInt(0))
    with pytest.raises(EvalError):
        load({1: Block(4, {})}, Chunk.INT32, VInt(0))


def test_pointer_arithmetic_and_comparisons():
    p, q = VPtr(3, 8), VPtr(3, 12)
    assert eval_binop(BinOp.ADD, p, VInt(4)) == q
    assert eval_binop(BinOp.ADD, VInt(4), p) == q
    assert eval_binop(BinOp.SUB, q, VInt(4)) == p
    assert eval_binop(BinOp.LTU, p, q) == VInt(1)
    assert eval_binop(BinOp.LTU, p, VPtr(4, 0)) is UNDEF
    assert eval_binop(BinOp.EQU, p, VInt(8)) == VInt(0)
    assert eval_binop(BinOp.NEU, p, VInt(8)) == VInt(1)
    assert eval_binop(BinOp.LTU, p, VInt(8)) is UNDEF
    assert eval_binop(BinOp.LT, p, q) is UNDEF
    assert eval_binop(BinOp.MUL, p, VInt(1)) is UNDEF
    assert eval_binop(BinOp.ADD, UNDEF, VInt(1)) is UNDEF


def test_stack_store_and_load_round_trip():
    src = """
function main(a) stack 8 {
  1: store(int32, addrstack(4), a) -> 2
  2: r = load(int32, addrstack(4)) + 1 -> 3
  3: return r
}"""
    assert final(src, a=41) == Finished(VInt(42))


def test_calls_bind_parameters_and_result():
    src = """
function main(a) { 1: call r = &sq(a) -> 2; 2: return r + a }
function sq(x) { 1: return x * x }
"""
    assert final(src, a=5) == Finished(VInt(30))


def test_recursion_depth_is_limited():
    src = "function main() { 1: call &main() -> 2; 2: return }"
    end = Machine(parse(src), max_depth=4).trace({}, 100)[1]
    assert isinstance(end, Stuck) and "depth" in end.reason


def test_conditional_expression_guard_must_be_an_integer():
    assert isinstance(final("1: x = (y ? 1 : 2) -> 2\n2: return x"), Stuck)
    assert final("1: x = (0 ? 1 : 2) -> 2\n2: return x") == Finished(VInt(2))
