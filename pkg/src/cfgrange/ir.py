"""The CFG intermediate language: constants, expressions, instructions, programs."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

from .machine_int import BinOp, UnOp, Word

NodeId = int


class SemanticError(ValueError):
    """A syntactically valid program that violates a structural invariant."""


class Chunk(str, Enum):
    INT8S = "int8s"
    INT8U = "int8u"
    INT16S = "int16s"
    INT16U = "int16u"
    INT32 = "int32"

    @property
    def size(self) -> int:
        return {"int8s": 1, "int8u": 1, "int16s": 2, "int16u": 2, "int32": 4}[self.value]


# -- constants ---------------------------------------------------------------

@dataclass(frozen=True)
class IntConst:
    value: Word


@dataclass(frozen=True)
class AddrSymbol:
    symbol: str
    offset: Word = 0


@dataclass(frozen=True)
class AddrStack:
    offset: Word


Constant = Union[IntConst, AddrSymbol, AddrStack]


# -- expressions -------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    const: Constant


@dataclass(frozen=True)
class Unop:
    op: UnOp
    arg: "Expr"


@dataclass(frozen=True)
class Binop:
    op: BinOp
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Cond:
    guard: "Expr"
    ifso: "Expr"
    ifnot: "Expr"


@dataclass(frozen=True)
class Load:
    chunk: Chunk
    addr: "Expr"


Expr = Union[Var, Const, Unop, Binop, Cond, Load]


def int_const(value: int) -> Const:
    return Const(IntConst(value & 0xFFFFFFFF))


def expr_vars(e: Expr) -> Iterator[str]:
    if isinstance(e, Var):
        yield e.name
    elif isinstance(e, Unop):
        yield from expr_vars(e.arg)
    elif isinstance(e, Binop):
        yield from expr_vars(e.left)
        yield from expr_vars(e.right)
    elif isinstance(e, Cond):
        yield from expr_vars(e.guard)
        yield from expr_vars(e.ifso)
        yield from expr_vars(e.ifnot)
    elif isinstance(e, Load):
        yield from expr_vars(e.addr)


# -- instructions ------------------------------------------------------------

@dataclass(frozen=True)
class Skip:
    succ: NodeId


@dataclass(frozen=True)
class Assign:
    dest: str
    expr: Expr
    succ: NodeId


@dataclass(frozen=True)
class Store:
    chunk: Chunk
    addr: Expr
    value: Expr
    succ: NodeId


@dataclass(frozen=True)
class If:
    cond: Expr
    ifso: NodeId
    ifnot: NodeId


@dataclass(frozen=True)
class Call:
    sig: Optional[str]
    dest: Optional[str]
    fn: Expr
    args: Tuple[Expr, ...]
    succ: NodeId


@dataclass(frozen=True)
class Return:
    value: Optional[Expr] = None


Instruction = Union[Skip, Assign, Store, If, Call, Return]


def successors(instr: Instruction) -> List[NodeId]:
    if isinstance(instr, If):
        return [instr.ifso, instr.ifnot]
    if isinstance(instr, Return):
        return []
    return [instr.succ]


# -- functions and programs --------------------------------------------------

@dataclass(frozen=True)
class CfgFunction:
    name: str
    params: Tuple[str, ...]
    stacksize: int
    entry: NodeId
    graph: Dict[NodeId, Instruction]
    report: FrozenSet[NodeId] = frozenset()

    def variables(self) -> List[str]:
        """Parameters followed by every other local the body mentions, sorted."""
        seen = set(self.params)
        extra = set()
        for instr in self.graph.values():
            dest = getattr(instr, "dest", None)
            if dest is not None:
                extra.add(dest)
            for e in _instr_exprs(instr):
                extra.update(expr_vars(e))
        return list(self.params) + sorted(extra - seen)

    def validate(self) -> None:
        if self.stacksize < 0:
            raise SemanticError(f"{self.name}: negative stack size")
        if self.entry not in self.graph:
            raise SemanticError(f"{self.name}: entry node {self.entry} is not in the graph")
        for node, instr in self.graph.items():
            if node <= 0:
                raise SemanticError(f"{self.name}: node ids must be positive, got {node}")
            for s in successors(instr):
                if s not in self.graph:
                    raise SemanticError(f"{self.name}: node {node} jumps to missing node {s}")
        for node in self.report:
            if node not in self.graph:
                raise SemanticError(f"{self.name}: report marker on missing node {node}")
        if len(set(self.params)) != len(self.params):
            raise SemanticError(f"{self.name}: duplicate parameter")


def _instr_exprs(instr: Instruction) -> List[Expr]:
    if isinstance(instr, Assign):
        return [instr.expr]
    if isinstance(instr, Store):
        return [instr.addr, instr.value]
    if isinstance(instr, If):
        return [instr.cond]
    if isinstance(instr, Call):
        return [instr.fn, *instr.args]
    if isinstance(instr, Return) and instr.value is not None:
        return [instr.value]
    return []


@dataclass(frozen=True)
class CfgProgram:
    functions: Dict[str, CfgFunction]
    globals: Dict[str, int] = field(default_factory=dict)
    main: str = "main"

    def validate(self) -> None:
        for name in self.functions:
            if name in self.globals:
                raise SemanticError(f"{name} is declared both as a global and a function")
        for size in self.globals.values():
            if size < 0:
                raise SemanticError("negative global size")
        for f in self.functions.values():
            f.validate()
        if self.main not in self.functions:
            raise SemanticError(f"no function named {self.main}")

    def symbols(self) -> List[str]:
        """Globals then functions, in declaration order; index + 1 is the block id."""
        return list(self.globals) + list(self.functions)
