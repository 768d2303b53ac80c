"""Whole-program value analysis, the concrete-oracle soundness check, and reports."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import machine_int as mi
from .concrete import Machine, State, VInt, VPtr, Value
from .domain import BOT
from .fixpoint import FixpointResult, iterate, solve_pfp
from .intervals import SIGNED, UNSIGNED, SignFlag, is_bounded
from .ir import (Assign, Call, CfgFunction, CfgProgram, If, Instruction, Return,
                 Skip, Store, Unop)
from .machine_int import UnOp
from .mem_abstract import MemDomain, default_domain


def build_transfer(f: CfgFunction, md: MemDomain) -> Callable:
    """Edge transformers for ``f``: ``transfer(node, instr) -> [(succ, tf), ...]``."""

    def transfer(node, instr: Instruction):
        if isinstance(instr, Skip):
            return [(instr.succ, _identity)]
        if isinstance(instr, Assign):
            dest, e = instr.dest, instr.expr
            return [(instr.succ, lambda ab: md.assign(dest, e, ab))]
        if isinstance(instr, Store):
            chunk, a, v = instr.chunk, instr.addr, instr.value
            return [(instr.succ, lambda ab: md.store(chunk, a, v, ab))]
        if isinstance(instr, If):
            e = instr.cond
            ne = Unop(UnOp.NOTBOOL, e)
            return [(instr.ifso, lambda ab: md.assume(e, ab)),
                    (instr.ifnot, lambda ab: md.assume(ne, ab))]
        if isinstance(instr, Call):
            dest = instr.dest
            if dest is None:
                return [(instr.succ, _identity)]
            return [(instr.succ, lambda ab: md.forget(dest, ab))]
        if isinstance(instr, Return):
            return []
        raise TypeError(instr)

    return transfer


def _identity(ab):
    return ab


@dataclass
class AnalysisResult:
    """Per-function fixpoints; ``range(fn, node, var, flag)`` is the queryable result."""
    program: CfgProgram
    domain: MemDomain
    states: Dict[str, FixpointResult]

    def state(self, fn: str, node: int):
        return self.states[fn][node]

    def range(self, fn: str, node: int, var: str, flag: SignFlag):
        return self.domain.range(self.states[fn][node], var, flag)

    def ranges(self, fn: str, node: int, var: str):
        return self.range(fn, node, var, SIGNED), self.range(fn, node, var, UNSIGNED)

    @property
    def fallbacks(self) -> Dict[str, str]:
        return {fn: r.diagnostic or "" for fn, r in self.states.items() if not r.accepted}


def analyze_function(f: CfgFunction, md: MemDomain, iterator: Callable = iterate) -> FixpointResult:
    return solve_pfp(md, f.graph, f.entry, build_transfer(f, md), md.top, iterator)


def value_analysis(prog: CfgProgram, md: Optional[MemDomain] = None,
                   iterator: Callable = iterate) -> AnalysisResult:
    """Analyze every function independently, parameters and callers unknown."""
    md = md or default_domain()
    states = {name: analyze_function(f, md, iterator) for name, f in prog.functions.items()}
    return AnalysisResult(prog, md, states)


# -- soundness oracle ----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    seed: int
    function: str
    node: int
    var: str
    value: int
    signed_range: object
    unsigned_range: object

    def __str__(self) -> str:
        return (f"seed {self.seed}: {self.function}@{self.node} {self.var}={self.value} "
                f"not in signed {self.signed_range} / unsigned {self.unsigned_range}")


INTERESTING = (0, 1, 2, 3, 7, 10, 100, 255, 256, 65535, 65536,
               mi.MAX_SIGNED, mi.HALF, mi.MAX_UNSIGNED, mi.MAX_UNSIGNED - 1, mi.HALF + 1,
               mi.MAX_SIGNED - 1)


def random_args(params: Sequence[str], rng: random.Random) -> Dict[str, Value]:
    """Entry values mixing corner cases, small numbers and arbitrary words."""
    args = {}
    for p in params:
        r = rng.random()
        if r < 0.4:
            w = rng.choice(INTERESTING)
        elif r < 0.8:
            w = mi.wrap(rng.randint(-20, 20))
        else:
            w = rng.getrandbits(32)
        args[p] = VInt(w)
    return args


def check_states(result: AnalysisResult, states: Iterable[State], seed: int = 0) -> List[Violation]:
    """Every integer or pointer offset held by a local lies in the inferred ranges."""
    out = []
    md = result.domain
    cache: Dict[Tuple[str, int], object] = {}
    for st in states:
        key = (st.function, st.pc)
        ab = cache.get(key)
        if ab is None:
            ab = cache[key] = result.states[st.function][st.pc]
        for var, v in st.env.items():
            if isinstance(v, VInt):
                i = v.value
            elif isinstance(v, VPtr):
                i = v.offset
            else:
                continue
            s = md.range(ab, var, SIGNED)
            u = md.range(ab, var, UNSIGNED)
            if s is BOT or u is BOT or not (s.lo <= mi.signed(i) <= s.hi and u.lo <= i <= u.hi):
                out.append(Violation(seed, st.function, st.pc, var, i, s, u))
    return out


def check_against_oracle(prog: CfgProgram, seeds: Iterable[int] = range(10), fuel: int = 500,
                         result: Optional[AnalysisResult] = None) -> List[Violation]:
    """Run the concrete interpreter from random entry values and compare with the analysis."""
    if result is None:
        result = value_analysis(prog)
    machine = Machine(prog)
    params = prog.functions[prog.main].params
    out = []
    for seed in seeds:
        args = random_args(params, random.Random(seed))
        states, _ = machine.trace(args, fuel)
        out.extend(check_states(result, states, seed))
    return out


# -- reports -----------------------------------------------------------------

def _itv_json(x):
    return "bot" if x is BOT else [x.lo, x.hi]


def report_nodes(f: CfgFunction, which: str) -> List[int]:
    if which == "marked":
        return sorted(f.report)
    return sorted(f.graph)


def report(prog: CfgProgram, result: AnalysisResult, nodes: str = "all") -> Dict:
    """``{function: {node: "unreachable" | {var: {signed, unsigned, bounded}}}}``.

    A variable is bounded when its signed or its unsigned interval has at
    most 2**31 elements.
    """
    doc: Dict = {}
    for name, f in prog.functions.items():
        variables = f.variables()
        fdoc = {}
        for node in report_nodes(f, nodes):
            ab = result.state(name, node)
            if ab is BOT:
                fdoc[str(node)] = "unreachable"
                continue
            vdoc = {}
            for var in variables:
                s, u = result.ranges(name, node, var)
                vdoc[var] = {"signed": _itv_json(s), "unsigned": _itv_json(u),
                             "bounded": is_bounded(s, u)}
            fdoc[str(node)] = vdoc
        doc[name] = fdoc
    return doc


def format_text(doc: Mapping) -> str:
    rows = [("function", "node", "var", "signed", "unsigned", "bounded")]
    for fn, nodes in doc.items():
        for node, vars_ in nodes.items():
            if vars_ == "unreachable":
                rows.append((fn, node, "-", "unreachable", "", ""))
                continue
            for var, info in vars_.items():
                rows.append((fn, node, var, _fmt(info["signed"]), _fmt(info["unsigned"]),
                             "yes" if info["bounded"] else "no"))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


def _fmt(x) -> str:
    return x if isinstance(x, str) else f"[{x[0]}, {x[1]}]"


def count_bounded(doc: Mapping) -> Tuple[int, int]:
    """(bounded, total) over every reported variable of reachable nodes."""
    bounded = total = 0
    for nodes in doc.values():
        for vars_ in nodes.values():
            if vars_ == "unreachable":
                continue
            for info in vars_.values():
                total += 1
                bounded += info["bounded"]
    return bounded, total
