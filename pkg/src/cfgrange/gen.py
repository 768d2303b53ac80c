"""Random well-formed programs for soundness fuzzing.

Programs are built from structured statements (assignments, stores,
conditionals, loops, calls) and then lowered to a CFG, so every generated
graph is valid.  Loop guards are mostly comparisons against a counter that
the body updates, which keeps a fair share of runs terminating.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Optional

from . import machine_int as mi
from .ir import (AddrStack, AddrSymbol, Assign, Binop, Call, CfgFunction, CfgProgram,
                 Chunk, Cond, Const, Expr, If, Instruction, Load, Return,
                 Store, Unop, Var, int_const)
from .machine_int import BinOp, UnOp

VAR_NAMES = ("a", "b", "c", "d", "i", "j", "k", "x")
CONSTS = (0, 1, 2, 3, 4, 7, 8, 10, 31, 32, 100, 255, 65535, 65536,
          mi.MAX_SIGNED, mi.HALF, mi.MAX_UNSIGNED, mi.MAX_UNSIGNED - 9)
CMP_OPS = [op for op in BinOp if op.relation is not None]
ARITH_OPS = [op for op in BinOp if op.relation is None]
SHIFT_OPS = (BinOp.SHL, BinOp.SHR, BinOp.SHRU)
STACK_SIZE = 16


@dataclass
class GenConfig:
    max_vars: int = 8
    max_nodes: int = 30
    max_depth: int = 4
    call_prob: float = 0.05
    with_helper: bool = True


@dataclass
class _Fn:
    graph: Dict[int, Instruction] = field(default_factory=dict)
    next_id: int = 1

    def add(self, instr: Instruction) -> int:
        n = self.next_id
        self.next_id += 1
        self.graph[n] = instr
        return n

    def reserve(self) -> int:
        n = self.next_id
        self.next_id += 1
        return n


class ProgramGenerator:
    def __init__(self, rng: random.Random, cfg: Optional[GenConfig] = None):
        self.rng = rng
        self.cfg = cfg or GenConfig()
        nvars = rng.randint(2, min(self.cfg.max_vars, len(VAR_NAMES)))
        self.vars = list(VAR_NAMES[:nvars])
        self.budget = 0

    # -- expressions
    def const(self) -> Expr:
        r = self.rng.random()
        if r < 0.6:
            return int_const(self.rng.choice(CONSTS))
        if r < 0.95:
            return int_const(self.rng.randint(-16, 16))
        return int_const(self.rng.getrandbits(32))

    def var(self) -> Var:
        return Var(self.rng.choice(self.vars))

    def expr(self, depth: int) -> Expr:
        rng = self.rng
        if depth <= 1 or rng.random() < 0.3:
            r = rng.random()
            if r < 0.55:
                return self.var()
            if r < 0.9:
                return self.const()
            if r < 0.94:
                return Load(rng.choice(list(Chunk)), Const(AddrStack(rng.choice((0, 4, 8, 2)))))
            return Const(AddrStack(rng.choice((0, 4, 8))))
        r = rng.random()
        if r < 0.15:
            return Unop(rng.choice(list(UnOp)), self.expr(depth - 1))
        if r < 0.3:
            return self.comparison(depth)
        if r < 0.37:
            return Cond(self.comparison(depth - 1), self.expr(depth - 1), self.expr(depth - 1))
        op = rng.choice(ARITH_OPS)
        rhs = self.expr(depth - 1)
        if op in SHIFT_OPS and rng.random() < 0.8:
            # mostly in-range shift amounts, so runs are not cut short
            rhs = Binop(BinOp.AND, rhs, int_const(31)) if rng.random() < 0.5 else \
                int_const(rng.randint(0, 31))
        return Binop(op, self.expr(depth - 1), rhs)

    def comparison(self, depth: int) -> Expr:
        d = max(1, depth - 1)
        a = self.expr(d) if self.rng.random() < 0.3 else self.var()
        b = self.expr(d) if self.rng.random() < 0.3 else self.const()
        if self.rng.random() < 0.5:
            a, b = b, a
        return Binop(self.rng.choice(CMP_OPS), a, b)

    # -- statements, lowered back to front: each returns its entry node
    def block(self, f: _Fn, succ: int, depth: int, length: int) -> int:
        stmts = [self.rng.random() for _ in range(length)]
        for r in stmts:
            if self.budget <= 0:
                break
            succ = self.stmt(f, succ, depth, r)
        return succ

    def stmt(self, f: _Fn, succ: int, depth: int, r: float) -> int:
        rng, cfg = self.rng, self.cfg
        if r < cfg.call_prob and cfg.with_helper:
            self.budget -= 1
            dest = self.var().name if rng.random() < 0.8 else None
            return f.add(Call(None, dest, Const(AddrSymbol("helper")),
                              (self.expr(2),), succ))
        if r < 0.12 and depth > 0 and self.budget >= 4:
            return self.loop(f, succ, depth)
        if r < 0.22 and depth > 0 and self.budget >= 3:
            self.budget -= 1
            then = self.block(f, succ, depth - 1, rng.randint(1, 3))
            other = self.block(f, succ, depth - 1, rng.randint(0, 2))
            return f.add(If(self.comparison(3) if rng.random() < 0.8 else self.expr(3),
                            then, other))
        if r < 0.3:
            self.budget -= 1
            chunk = rng.choice(list(Chunk))
            ofs = rng.choice((0, 4, 8, 12, 1, 2))
            return f.add(Store(chunk, Const(AddrStack(ofs)), self.expr(3), succ))
        self.budget -= 1
        return f.add(Assign(self.var().name, self.expr(self.cfg.max_depth), succ))

    def loop(self, f: _Fn, succ: int, depth: int) -> int:
        rng = self.rng
        self.budget -= 3
        head = f.reserve()
        i = self.var()
        step = rng.choice((1, 1, 1, 2, 3, -1))
        incr = f.add(Assign(i.name, Binop(BinOp.ADD, i, int_const(step)), head))
        body = self.block(f, incr, depth - 1, rng.randint(0, 3))
        if rng.random() < 0.85:
            bound = int_const(rng.choice((3, 5, 10, 16, 100, -1, 0)))
            op = rng.choice((BinOp.LT, BinOp.LE, BinOp.NE, BinOp.LTU, BinOp.LEU, BinOp.GT))
            guard: Expr = Binop(op, i, bound)
            if op is BinOp.GT:
                guard = Binop(op, bound, i)
        else:
            guard = self.expr(3)
        f.graph[head] = If(guard, body, succ)
        init = int_const(rng.choice((0, 0, 1, -5, 10)))
        return f.add(Assign(i.name, init, head))

    def function(self, name: str, params, nodes: int) -> CfgFunction:
        f = _Fn()
        self.budget = nodes - 1
        ret = f.add(Return(self.var() if self.rng.random() < 0.8 else None))
        entry = ret
        while self.budget > 0:
            entry = self.block(f, entry, self.cfg.max_depth - 1, self.rng.randint(1, 4))
        return CfgFunction(name, tuple(params), STACK_SIZE, entry, f.graph)


def generate(seed: int, cfg: Optional[GenConfig] = None) -> CfgProgram:
    """A random valid program; ``main`` takes every variable as a parameter."""
    rng = random.Random(seed)
    g = ProgramGenerator(rng, cfg)
    cfg = g.cfg
    functions = {}
    nodes = rng.randint(6, cfg.max_nodes)
    functions["main"] = g.function("main", list(g.vars), nodes)
    if cfg.with_helper:
        saved = g.vars
        g.vars = ["p", "q"]
        g.cfg = GenConfig(cfg.max_vars, 8, 2, 0.0, False)
        functions["helper"] = g.function("helper", ["p"], 6)
        g.vars, g.cfg = saved, cfg
    prog = CfgProgram(functions, {"tab": 16}, "main")
    prog.validate()
    return prog


def nested_loops(size: int = 10_000, depth: int = 3, nvars: int = 8, seed: int = 0) -> CfgProgram:
    """One function of exactly ``size`` nodes made of ``depth``-deep counted loop nests.

    Each nest is ``for i0 { for i1 { ... straight-line body ... } }`` with
    counters distinct from the body variables.  Used as a scalability workload.
    """
    rng = random.Random(seed)
    body_vars = [f"v{k}" for k in range(nvars)]
    counters = [f"i{k}" for k in range(depth)]
    graph: Dict[int, Instruction] = {}
    ids = iter(range(1, size + 1))
    ret = next(ids)
    graph[ret] = Return(Var(body_vars[0]))
    remaining = size - 1
    succ = ret

    def straight(n: int, succ: int) -> int:
        for _ in range(n):
            x, y = rng.sample(body_vars, 2)
            op = rng.choice((BinOp.ADD, BinOp.SUB, BinOp.AND, BinOp.MUL))
            e = Binop(op, Var(y), int_const(rng.randint(-3, 7))) if rng.random() < 0.7 \
                else Binop(op, Var(x), Var(y))
            node = next(ids)
            graph[node] = Assign(x, e, succ)
            succ = node
        return succ

    def nest(level: int, body_len: int, succ: int) -> int:
        # init -> head -(true)-> body... -> incr -> head ; head -(false)-> succ
        i = Var(counters[level])
        head, incr, init = next(ids), next(ids), next(ids)
        graph[incr] = Assign(i.name, Binop(BinOp.ADD, i, int_const(1)), head)
        inner = nest(level + 1, body_len, incr) if level + 1 < depth else \
            straight(body_len, incr)
        graph[head] = If(Binop(BinOp.LT, i, int_const(rng.choice((4, 10, 100)))), inner, succ)
        graph[init] = Assign(i.name, int_const(0), head)
        return init

    per_nest_overhead = 3 * depth
    while remaining > 0:
        body_len = rng.randint(5, 40)
        if remaining >= per_nest_overhead + body_len:
            succ = nest(0, body_len, succ)
            remaining -= per_nest_overhead + body_len
        else:
            succ = straight(remaining, succ)
            remaining = 0
    f = CfgFunction("main", tuple(body_vars), 0, succ, graph)
    prog = CfgProgram({"main": f}, {}, "main")
    prog.validate()
    return prog
