"""Small-step concrete semantics of CFG programs.

Memory is cell based: every block maps offsets to ``(chunk, value)`` cells and
a load only sees a cell stored at exactly the same offset with the same chunk
(anything else reads ``UNDEF``).  Nondeterministic choices are modelled by
input parameters, so :func:`step` is a function.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Optional, Tuple, Union

from . import machine_int as mi
from .ir import (AddrStack, Assign, Binop, Call, CfgFunction,
                 CfgProgram, Chunk, Cond, Const, Expr, If, IntConst, Load,
                 Return, Skip, Store, Unop, Var)
from .machine_int import BinOp, Cmp, Word

BlockId = int


@dataclass(frozen=True)
class VInt:
    value: Word


@dataclass(frozen=True)
class VPtr:
    block: BlockId
    offset: Word


class _Undef:
    __slots__ = ()

    def __repr__(self) -> str:
        return "UNDEF"


UNDEF = _Undef()
Value = Union[VInt, VPtr, _Undef]


class EvalError(Exception):
    """Undefined behavior while evaluating an expression."""


# -- memory ------------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    size: int
    cells: Mapping[int, Tuple[Chunk, Value]]


Memory = Mapping[BlockId, Block]


def _check_access(mem: Memory, addr: Value, chunk: Chunk) -> Tuple[BlockId, int]:
    if not isinstance(addr, VPtr):
        raise EvalError(f"memory access through non-pointer {addr!r}")
    blk = mem.get(addr.block)
    if blk is None:
        raise EvalError(f"access to unallocated block {addr.block}")
    if addr.offset + chunk.size > blk.size:
        raise EvalError(f"out-of-bounds access at {addr.block}+{addr.offset}")
    return addr.block, addr.offset


def load(mem: Memory, chunk: Chunk, addr: Value) -> Value:
    b, ofs = _check_access(mem, addr, chunk)
    cell = mem[b].cells.get(ofs)
    if cell is None or cell[0] is not chunk:
        return UNDEF
    return cell[1]


def normalize(chunk: Chunk, v: Value) -> Value:
    """The value a store with ``chunk`` actually keeps."""
    if isinstance(v, VInt):
        if chunk is Chunk.INT8S:
            return VInt(mi.arith_unop(mi.UnOp.CAST8S, v.value))
        if chunk is Chunk.INT8U:
            return VInt(v.value & 0xFF)
        if chunk is Chunk.INT16S:
            return VInt(mi.arith_unop(mi.UnOp.CAST16S, v.value))
        if chunk is Chunk.INT16U:
            return VInt(v.value & 0xFFFF)
        return v
    if isinstance(v, VPtr) and chunk is Chunk.INT32:
        return v
    return UNDEF


def store(mem: Memory, chunk: Chunk, addr: Value, v: Value) -> Dict[BlockId, Block]:
    b, ofs = _check_access(mem, addr, chunk)
    blk = mem[b]
    end = ofs + chunk.size
    cells = {o: c for o, c in blk.cells.items() if o + c[0].size <= ofs or o >= end}
    cells[ofs] = (chunk, normalize(chunk, v))
    out = dict(mem)
    out[b] = Block(blk.size, cells)
    return out


# -- expressions -------------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """A suspended caller waiting for a callee to return."""
    function: str
    env: Mapping[str, Value]
    stackblock: BlockId
    dest: Optional[str]
    succ: int


@dataclass(frozen=True)
class State:
    function: str
    pc: int
    env: Mapping[str, Value]
    mem: Memory
    stackblock: BlockId
    frames: Tuple[Frame, ...] = ()
    next_block: BlockId = 1


@dataclass(frozen=True)
class Finished:
    value: Optional[Value]


@dataclass(frozen=True)
class Stuck:
    reason: str


StepResult = Union[State, Finished, Stuck]


def symbol_blocks(prog: CfgProgram) -> Dict[str, BlockId]:
    return {name: i + 1 for i, name in enumerate(prog.symbols())}


def eval_binop(op: BinOp, a: Value, b: Value) -> Value:
    if isinstance(a, VInt) and isinstance(b, VInt):
        try:
            return VInt(mi.arith(op, a.value, b.value))
        except mi.ArithError as exc:
            raise EvalError(str(exc)) from None
    if a is UNDEF or b is UNDEF:
        return UNDEF
    # at least one pointer
    if op is BinOp.ADD:
        if isinstance(a, VPtr) and isinstance(b, VInt):
            return VPtr(a.block, mi.wrap(a.offset + b.value))
        if isinstance(a, VInt) and isinstance(b, VPtr):
            return VPtr(b.block, mi.wrap(a.value + b.offset))
        return UNDEF
    if op is BinOp.SUB:
        if isinstance(a, VPtr) and isinstance(b, VInt):
            return VPtr(a.block, mi.wrap(a.offset - b.value))
        return UNDEF
    if op.is_unsigned_cmp:
        rel = op.relation
        if isinstance(a, VPtr) and isinstance(b, VPtr):
            if a.block == b.block:
                return VInt(1 if rel.holds(a.offset, b.offset) else 0)
            return UNDEF
        # a pointer is never equal to an integer
        if rel is Cmp.EQ:
            return VInt(0)
        if rel is Cmp.NE:
            return VInt(1)
    return UNDEF


def eval_expr(prog: CfgProgram, blocks: Mapping[str, BlockId], state: State, e: Expr) -> Value:
    if isinstance(e, Var):
        return state.env.get(e.name, UNDEF)
    if isinstance(e, Const):
        c = e.const
        if isinstance(c, IntConst):
            return VInt(c.value)
        if isinstance(c, AddrStack):
            return VPtr(state.stackblock, c.offset)
        if c.symbol not in blocks:
            raise EvalError(f"unknown symbol {c.symbol}")
        return VPtr(blocks[c.symbol], c.offset)
    if isinstance(e, Unop):
        v = eval_expr(prog, blocks, state, e.arg)
        if isinstance(v, VInt):
            return VInt(mi.arith_unop(e.op, v.value))
        return UNDEF
    if isinstance(e, Binop):
        a = eval_expr(prog, blocks, state, e.left)
        b = eval_expr(prog, blocks, state, e.right)
        return eval_binop(e.op, a, b)
    if isinstance(e, Cond):
        g = eval_expr(prog, blocks, state, e.guard)
        if not isinstance(g, VInt):
            raise EvalError(f"conditional guard is {g!r}")
        return eval_expr(prog, blocks, state, e.ifso if g.value else e.ifnot)
    if isinstance(e, Load):
        addr = eval_expr(prog, blocks, state, e.addr)
        return load(state.mem, e.chunk, addr)
    raise TypeError(e)


# -- states and steps --------------------------------------------------------

class Machine:
    """Executes one program; caches the symbol-to-block table."""

    def __init__(self, prog: CfgProgram, max_depth: int = 64):
        self.prog = prog
        self.blocks = symbol_blocks(prog)
        self.fn_of_block = {self.blocks[name]: name for name in prog.functions}
        self.max_depth = max_depth

    def initial_memory(self) -> Dict[BlockId, Block]:
        mem = {}
        for name, size in self.prog.globals.items():
            mem[self.blocks[name]] = Block(size, {})
        for name in self.prog.functions:
            mem[self.blocks[name]] = Block(0, {})
        return mem

    def initial_state(self, args: Mapping[str, Value], function: Optional[str] = None) -> State:
        fname = function or self.prog.main
        f = self.prog.functions[fname]
        mem = self.initial_memory()
        sb = len(self.blocks) + 1
        mem[sb] = Block(f.stacksize, {})
        env = {p: args.get(p, UNDEF) for p in f.params}
        return State(fname, f.entry, env, mem, sb, (), sb + 1)

    def eval(self, state: State, e: Expr) -> Value:
        return eval_expr(self.prog, self.blocks, state, e)

    def step(self, state: State) -> StepResult:
        f = self.prog.functions[state.function]
        instr = f.graph.get(state.pc)
        if instr is None:
            return Stuck(f"no node {state.pc}")
        try:
            return self._step(state, f, instr)
        except EvalError as exc:
            return Stuck(str(exc))

    def _step(self, s: State, f: CfgFunction, instr) -> StepResult:
        if isinstance(instr, Skip):
            return replace(s, pc=instr.succ)
        if isinstance(instr, Assign):
            env = dict(s.env)
            env[instr.dest] = self.eval(s, instr.expr)
            return replace(s, pc=instr.succ, env=env)
        if isinstance(instr, Store):
            addr = self.eval(s, instr.addr)
            v = self.eval(s, instr.value)
            return replace(s, pc=instr.succ, mem=store(s.mem, instr.chunk, addr, v))
        if isinstance(instr, If):
            g = self.eval(s, instr.cond)
            if not isinstance(g, VInt):
                return Stuck(f"branch on {g!r}")
            return replace(s, pc=instr.ifso if g.value else instr.ifnot)
        if isinstance(instr, Call):
            target = self.eval(s, instr.fn)
            args = [self.eval(s, a) for a in instr.args]
            if not (isinstance(target, VPtr) and target.offset == 0
                    and target.block in self.fn_of_block):
                return Stuck(f"call to non-function {target!r}")
            if len(s.frames) >= self.max_depth:
                return Stuck("OutOfFuel: call depth")
            callee = self.prog.functions[self.fn_of_block[target.block]]
            if len(args) != len(callee.params):
                return Stuck(f"arity mismatch calling {callee.name}")
            frame = Frame(s.function, s.env, s.stackblock, instr.dest, instr.succ)
            mem = dict(s.mem)
            sb = s.next_block
            mem[sb] = Block(callee.stacksize, {})
            return State(callee.name, callee.entry, dict(zip(callee.params, args)), mem, sb,
                         s.frames + (frame,), sb + 1)
        if isinstance(instr, Return):
            v = self.eval(s, instr.value) if instr.value is not None else None
            mem = dict(s.mem)
            del mem[s.stackblock]
            if not s.frames:
                return Finished(v)
            caller = s.frames[-1]
            env = dict(caller.env)
            if caller.dest is not None:
                env[caller.dest] = UNDEF if v is None else v
            return State(caller.function, caller.succ, env, mem, caller.stackblock,
                         s.frames[:-1], s.next_block)
        raise TypeError(instr)

    def trace(self, args: Mapping[str, Value], fuel: int) -> Tuple[List[State], StepResult]:
        """The first ``fuel`` steps of the run; also returns how the run ended."""
        state = self.initial_state(args)
        states = [state]
        end: StepResult = state
        for _ in range(fuel):
            end = self.step(state)
            if not isinstance(end, State):
                break
            state = end
            states.append(state)
        else:
            end = Stuck("OutOfFuel")
        return states, end


def trace(prog: CfgProgram, entry_env: Mapping[str, Value], fuel: int) -> List[State]:
    return Machine(prog).trace(entry_env, fuel)[0]


def run(prog: CfgProgram, entry_env: Mapping[str, Value], fuel: int = 100_000) -> StepResult:
    return Machine(prog).trace(entry_env, fuel)[1]
