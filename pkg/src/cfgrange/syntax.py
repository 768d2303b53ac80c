"""Text format for CFG programs.

One instruction per line (``;`` also ends a line)::

    global tab 64
    function main(x, n) stack 8 entry 1 {
      1: i = 0 -> 2
      @report 2: if (i < n) -> 3, 5
      3: store(int32, addrstack(0), i) -> 4
      4: i = i + 1 -> 2
      5: return i
    }

A file without any ``function`` block is a bare instruction list and becomes
a parameterless ``main`` whose entry is the first node listed.  Unsigned
operators carry a ``u`` suffix glued to the operator (``<u``, ``>>u``,
``/u``); a variable named ``u`` must therefore be separated from a preceding
operator by whitespace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .ir import (AddrStack, AddrSymbol, Assign, Binop, Call, CfgFunction,
                 CfgProgram, Chunk, Cond, Const, Expr, If, Instruction, IntConst,
                 Load, Return, SemanticError, Skip, Store, Unop, Var)
from .machine_int import BinOp, UnOp, signed, wrap


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str  # INT, IDENT, STRING, OP, NL, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>[\n;])
  | (?P<int>0[xX][0-9a-fA-F]+|[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<uop>(?:>>|<=|>=|==|!=|<|>|/|%)u(?![A-Za-z0-9_]))
  | (?P<op>->|<<|>>|<=|>=|==|!=|&&|\|\||[-+*/%&|^<>!~?:(),{}=@])
""", re.VERBOSE)


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            tokens.append(Token("NL", m.group(), line, col))
            if m.group() == "\n":
                line += 1
                line_start = m.end()
        elif kind == "int":
            tokens.append(Token("INT", m.group(), line, col))
        elif kind == "ident":
            tokens.append(Token("IDENT", m.group(), line, col))
        elif kind == "string":
            tokens.append(Token("STRING", m.group()[1:-1], line, col))
        elif kind in ("uop", "op"):
            tokens.append(Token("OP", m.group(), line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


_UNOP_NAMES = {
    "cast8unsigned": UnOp.CAST8U, "cast8u": UnOp.CAST8U,
    "cast8signed": UnOp.CAST8S, "cast8s": UnOp.CAST8S,
    "cast16unsigned": UnOp.CAST16U, "cast16u": UnOp.CAST16U,
    "cast16signed": UnOp.CAST16S, "cast16s": UnOp.CAST16S,
    "boolval": UnOp.BOOLVAL, "negint": UnOp.NEGINT,
    "notbool": UnOp.NOTBOOL, "notint": UnOp.NOTINT,
}
_SYMBOL_UNOPS = {"-": UnOp.NEGINT, "~": UnOp.NOTINT, "!": UnOp.NOTBOOL}

# binary precedence levels, loosest first
_LEVELS: List[Tuple[str, ...]] = [
    ("|",), ("^",), ("&",),
    ("==", "!=", "==u", "!=u"),
    ("<", "<=", ">", ">=", "<u", "<=u", ">u", ">=u"),
    ("<<", ">>", ">>u"),
    ("+", "-"),
    ("*", "/", "%", "/u", "%u"),
]
_PREC = {op: i for i, level in enumerate(_LEVELS) for op in level}

KEYWORDS = frozenset({"skip", "if", "store", "call", "return", "global", "function",
                      "stack", "entry", "sig", "load", "addrstack", "addrsymbol",
                      *_UNOP_NAMES})

_TRUE = Const(IntConst(1))
_FALSE = Const(IntConst(0))


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        if self.at(kind, text):
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.accept(kind, text)
        if t is None:
            want = text if text is not None else kind.lower()
            got = self.tok.text or self.tok.kind.lower()
            raise self.error(f"expected {want!r}, got {got!r}")
        return t

    def skip_newlines(self) -> None:
        while self.accept("NL"):
            pass

    def end_of_line(self) -> None:
        if not (self.accept("NL") or self.at("EOF") or self.at("OP", "}")):
            raise self.error(f"expected end of line, got {self.tok.text!r}")

    def integer(self) -> int:
        neg = self.accept("OP", "-") is not None
        t = self.expect("INT")
        n = int(t.text, 0)
        return -n if neg else n

    def ident(self) -> str:
        t = self.expect("IDENT")
        if t.text in KEYWORDS:
            raise self.error(f"{t.text!r} is a reserved word", t)
        return t.text

    def word(self) -> int:
        t = self.tok
        n = self.integer()
        if not -(1 << 31) <= n <= 0xFFFFFFFF:
            raise self.error(f"integer literal {n} does not fit in 32 bits", t)
        return wrap(n)

    def label(self) -> int:
        return int(self.expect("INT").text, 0)

    # -- program structure
    def program(self) -> CfgProgram:
        self.skip_newlines()
        functions: Dict[str, CfgFunction] = {}
        globals_: Dict[str, int] = {}
        if not (self.at("IDENT", "global") or self.at("IDENT", "function")):
            body = self.body(closing=None)
            if not body[0]:
                raise self.error("empty program")
            graph, report, first = body
            functions["main"] = CfgFunction("main", (), 0, first, graph, frozenset(report))
            self.expect("EOF")
            return CfgProgram(functions, globals_, "main")
        while not self.at("EOF"):
            if self.accept("IDENT", "global"):
                t = self.tok
                name = self.ident()
                if name in globals_ or name in functions:
                    raise SemanticError(f"duplicate symbol {name!r} (line {t.line})")
                globals_[name] = self.label()
                self.end_of_line()
            elif self.accept("IDENT", "function"):
                t = self.tok
                f = self.function()
                if f.name in globals_ or f.name in functions:
                    raise SemanticError(f"duplicate symbol {f.name!r} (line {t.line})")
                functions[f.name] = f
            else:
                raise self.error(f"expected 'global' or 'function', got {self.tok.text!r}")
            self.skip_newlines()
        main = "main" if "main" in functions else next(iter(functions), "main")
        return CfgProgram(functions, globals_, main)

    def function(self) -> CfgFunction:
        name = self.ident()
        self.expect("OP", "(")
        params: List[str] = []
        if not self.at("OP", ")"):
            params.append(self.ident())
            while self.accept("OP", ","):
                params.append(self.ident())
        self.expect("OP", ")")
        stack, entry = 0, None
        while True:
            if self.accept("IDENT", "stack"):
                stack = self.label()
            elif self.accept("IDENT", "entry"):
                entry = self.label()
            else:
                break
        self.expect("OP", "{")
        self.skip_newlines()
        graph, report, first = self.body(closing="}")
        self.expect("OP", "}")
        self.end_of_line()
        if not graph:
            raise SemanticError(f"function {name} has no instructions")
        return CfgFunction(name, tuple(params), stack, first if entry is None else entry,
                           graph, frozenset(report))

    def body(self, closing: Optional[str]):
        graph: Dict[int, Instruction] = {}
        report = set()
        first = None
        while True:
            self.skip_newlines()
            if self.at("EOF") or (closing and self.at("OP", closing)):
                break
            marked = False
            if self.accept("OP", "@"):
                t = self.expect("IDENT")
                if t.text != "report":
                    raise self.error(f"unknown marker @{t.text}", t)
                marked = True
            t = self.tok
            node = self.label()
            self.expect("OP", ":")
            if node in graph:
                raise SemanticError(f"duplicate node {node} (line {t.line})")
            graph[node] = self.instruction()
            if first is None:
                first = node
            if marked:
                report.add(node)
            self.end_of_line()
        return graph, report, first

    def arrow(self) -> int:
        self.expect("OP", "->")
        return self.label()

    def instruction(self) -> Instruction:
        t = self.tok
        if t.kind == "IDENT" and t.text == "skip":
            self.i += 1
            return Skip(self.arrow())
        if t.kind == "IDENT" and t.text == "if":
            self.i += 1
            cond = self.expr()
            self.expect("OP", "->")
            l1 = self.label()
            self.expect("OP", ",")
            return If(cond, l1, self.label())
        if t.kind == "IDENT" and t.text == "store":
            self.i += 1
            self.expect("OP", "(")
            chunk = self.chunk()
            self.expect("OP", ",")
            addr = self.expr()
            self.expect("OP", ",")
            val = self.expr()
            self.expect("OP", ")")
            return Store(chunk, addr, val, self.arrow())
        if t.kind == "IDENT" and t.text == "call":
            self.i += 1
            dest = None
            if self.at("IDENT") and self.peek().kind == "OP" and self.peek().text == "=":
                dest = self.ident()
                self.expect("OP", "=")
            fn = self.unary()
            self.expect("OP", "(")
            args: List[Expr] = []
            if not self.at("OP", ")"):
                args.append(self.expr())
                while self.accept("OP", ","):
                    args.append(self.expr())
            self.expect("OP", ")")
            sig = None
            if self.accept("IDENT", "sig"):
                sig = self.expect("STRING").text
            return Call(sig, dest, fn, tuple(args), self.arrow())
        if t.kind == "IDENT" and t.text == "return":
            self.i += 1
            if self.at("NL") or self.at("EOF") or self.at("OP", "}"):
                return Return(None)
            return Return(self.expr())
        dest = self.ident()
        self.expect("OP", "=")
        e = self.expr()
        return Assign(dest, e, self.arrow())

    def chunk(self) -> Chunk:
        t = self.expect("IDENT")
        try:
            return Chunk(t.text)
        except ValueError:
            raise self.error(f"unknown memory chunk {t.text!r}", t) from None

    # -- expressions
    def expr(self) -> Expr:
        guard = self.logical_or()
        if self.accept("OP", "?"):
            a = self.expr()
            self.expect("OP", ":")
            b = self.expr()
            return Cond(guard, a, b)
        return guard

    def logical_or(self) -> Expr:
        e = self.logical_and()
        while self.accept("OP", "||"):
            rhs = self.logical_and()
            e = Cond(e, _TRUE, Cond(rhs, _TRUE, _FALSE))
        return e

    def logical_and(self) -> Expr:
        e = self.binary(0)
        while self.accept("OP", "&&"):
            rhs = self.binary(0)
            e = Cond(e, Cond(rhs, _TRUE, _FALSE), _FALSE)
        return e

    def binary(self, level: int) -> Expr:
        if level == len(_LEVELS):
            return self.unary()
        e = self.binary(level + 1)
        while self.tok.kind == "OP" and self.tok.text in _LEVELS[level]:
            op = BinOp(self.tok.text)
            self.i += 1
            e = Binop(op, e, self.binary(level + 1))
        return e

    def unary(self) -> Expr:
        t = self.tok
        if t.kind == "OP" and t.text in _SYMBOL_UNOPS:
            self.i += 1
            if t.text == "-" and self.at("INT"):
                self.i -= 1
                return Const(IntConst(self.word()))
            return Unop(_SYMBOL_UNOPS[t.text], self.unary())
        if t.kind == "IDENT" and t.text in _UNOP_NAMES:
            self.i += 1
            self.expect("OP", "(")
            arg = self.expr()
            self.expect("OP", ")")
            return Unop(_UNOP_NAMES[t.text], arg)
        return self.primary()

    def primary(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            return Const(IntConst(self.word()))
        if self.accept("OP", "("):
            e = self.expr()
            self.expect("OP", ")")
            return e
        if self.accept("OP", "&"):
            return Const(AddrSymbol(self.ident(), 0))
        if t.kind == "IDENT" and t.text == "load":
            self.i += 1
            self.expect("OP", "(")
            chunk = self.chunk()
            self.expect("OP", ",")
            addr = self.expr()
            self.expect("OP", ")")
            return Load(chunk, addr)
        if t.kind == "IDENT" and t.text == "addrstack":
            self.i += 1
            self.expect("OP", "(")
            n = self.word()
            self.expect("OP", ")")
            return Const(AddrStack(n))
        if t.kind == "IDENT" and t.text == "addrsymbol":
            self.i += 1
            self.expect("OP", "(")
            name = self.ident()
            self.expect("OP", ",")
            n = self.word()
            self.expect("OP", ")")
            return Const(AddrSymbol(name, n))
        if t.kind == "IDENT":
            return Var(self.ident())
        raise self.error(f"unexpected {t.text or t.kind.lower()!r} in expression")


def parse(text: str) -> CfgProgram:
    """Parse and validate a program; raises ParseError or SemanticError."""
    prog = _Parser(text).program()
    prog.validate()
    return prog


# -- printing ----------------------------------------------------------------

def format_word(w: int) -> str:
    if w < (1 << 31):
        return str(w)
    s = signed(w)
    return str(s) if s >= -(1 << 16) else str(w)


def format_const(c) -> str:
    if isinstance(c, IntConst):
        return format_word(c.value)
    if isinstance(c, AddrStack):
        return f"addrstack({format_word(c.offset)})"
    if c.offset == 0:
        return f"&{c.symbol}"
    return f"addrsymbol({c.symbol}, {format_word(c.offset)})"


def format_expr(e: Expr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return format_const(e.const)
    if isinstance(e, Unop):
        return f"{e.op.value}({format_expr(e.arg)})"
    if isinstance(e, Binop):
        return f"{_sub(e.left)} {e.op.value} {_sub(e.right)}"
    if isinstance(e, Cond):
        return f"{_sub(e.guard)} ? {_sub(e.ifso)} : {_sub(e.ifnot)}"
    if isinstance(e, Load):
        return f"load({e.chunk.value}, {format_expr(e.addr)})"
    raise TypeError(e)


def _sub(e: Expr) -> str:
    s = format_expr(e)
    if isinstance(e, (Binop, Cond)) or (isinstance(e, Const) and s.startswith("-")):
        return f"({s})"
    return s


def format_instr(i: Instruction) -> str:
    if isinstance(i, Skip):
        return f"skip -> {i.succ}"
    if isinstance(i, Assign):
        return f"{i.dest} = {format_expr(i.expr)} -> {i.succ}"
    if isinstance(i, Store):
        return (f"store({i.chunk.value}, {format_expr(i.addr)}, "
                f"{format_expr(i.value)}) -> {i.succ}")
    if isinstance(i, If):
        return f"if ({format_expr(i.cond)}) -> {i.ifso}, {i.ifnot}"
    if isinstance(i, Call):
        dest = f"{i.dest} = " if i.dest else ""
        fn = format_expr(i.fn)
        if not isinstance(i.fn, (Var, Const)) or fn.startswith("-"):
            fn = f"({fn})"
        args = ", ".join(format_expr(a) for a in i.args)
        sig = f' sig "{i.sig}"' if i.sig is not None else ""
        return f"call {dest}{fn}({args}){sig} -> {i.succ}"
    if isinstance(i, Return):
        return "return" if i.value is None else f"return {format_expr(i.value)}"
    raise TypeError(i)


def format_program(p: CfgProgram) -> str:
    lines = [f"global {name} {size}" for name, size in p.globals.items()]
    for f in p.functions.values():
        if lines:
            lines.append("")
        lines.append(f"function {f.name}({', '.join(f.params)}) "
                     f"stack {f.stacksize} entry {f.entry} {{")
        for node in sorted(f.graph):
            mark = "@report " if node in f.report else ""
            lines.append(f"  {mark}{node}: {format_instr(f.graph[node])}")
        lines.append("}")
    return "\n".join(lines) + "\n"
