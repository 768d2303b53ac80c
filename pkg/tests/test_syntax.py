import pytest
from hypothesis import given, settings, strategies as st

from cfgrange.gen import generate
from cfgrange.ir import (AddrStack, AddrSymbol, Assign, Binop, Call, Chunk, Cond, Const, If,
                         IntConst, Load, Return, SemanticError, Store, Unop, Var)
from cfgrange.machine_int import BinOp, UnOp
from cfgrange.syntax import ParseError, format_expr, format_program, parse, tokenize


def one_expr(src: str):
    return parse(f"1: r = {src} -> 2\n2: return").functions["main"].graph[1].expr


def test_bare_instruction_list_becomes_main():
    p = parse("5: x = 3 -> 6\n6: return x\n")
    f = p.functions["main"]
    assert f.entry == 5 and f.params == ()
    assert f.graph[5] == Assign("x", Const(IntConst(3)), 6)
    assert f.graph[6] == Return(Var("x"))


def test_function_header_and_markers():
    p = parse("""
global tab 16
function main(a, b) stack 8 entry 2 {
  1: return a
  @report 2: if (a <u b) -> 1, 3
  3: store(int16s, addrstack(4), b) -> 1
}
""")
    f = p.functions["main"]
    assert (f.params, f.stacksize, f.entry, f.report) == (("a", "b"), 8, 2, frozenset({2}))
    assert f.graph[2] == If(Binop(BinOp.LTU, Var("a"), Var("b")), 1, 3)
    assert f.graph[3] == Store(Chunk.INT16S, Const(AddrStack(4)), Var("b"), 1)
    assert p.globals == {"tab": 16}


def test_calls():
    p = parse("""
function main() { 1: call r = &g(1, 2) sig "ii" -> 2; 2: call &g(0, 0) -> 3; 3: return r }
function g(x, y) { 1: return x + y }
""")
    g = p.functions["main"].graph
    assert g[1] == Call("ii", "r", Const(AddrSymbol("g")), (Const(IntConst(1)), Const(IntConst(2))), 2)
    assert g[2].dest is None


def test_precedence_and_associativity():
    assert one_expr("1 + 2 * 3") == Binop(BinOp.ADD, Const(IntConst(1)),
                                          Binop(BinOp.MUL, Const(IntConst(2)), Const(IntConst(3))))
    assert one_expr("a - b - c") == Binop(BinOp.SUB, Binop(BinOp.SUB, Var("a"), Var("b")), Var("c"))
    assert one_expr("a < b == c") == Binop(BinOp.EQ, Binop(BinOp.LT, Var("a"), Var("b")), Var("c"))
    assert one_expr("a | b & c") == Binop(BinOp.OR, Var("a"), Binop(BinOp.AND, Var("b"), Var("c")))


def test_negative_literals_and_unary_operators():
    assert one_expr("-1") == Const(IntConst(2 ** 32 - 1))
    assert one_expr("-x") == Unop(UnOp.NEGINT, Var("x"))
    assert one_expr("~x") == Unop(UnOp.NOTINT, Var("x"))
    assert one_expr("!x") == Unop(UnOp.NOTBOOL, Var("x"))
    assert one_expr("cast8s(x)") == Unop(UnOp.CAST8S, Var("x"))
    assert one_expr("-2147483648") == Const(IntConst(2 ** 31))
    assert one_expr("4294967295") == Const(IntConst(2 ** 32 - 1))


def test_logical_operators_desugar_to_conditionals():
    one, zero = Const(IntConst(1)), Const(IntConst(0))
    assert one_expr("a && b") == Cond(Var("a"), Cond(Var("b"), one, zero), zero)
    assert one_expr("a || b") == Cond(Var("a"), one, Cond(Var("b"), one, zero))


def test_unsigned_operator_tokens():
    kinds = [(t.kind, t.text) for t in tokenize("a <u b >>u c u")][:-1]
    assert kinds == [("IDENT", "a"), ("OP", "<u"), ("IDENT", "b"), ("OP", ">>u"),
                     ("IDENT", "c"), ("IDENT", "u")]
    # an operator followed by an identifier starting with u stays signed
    assert [t.text for t in tokenize("a<ux")][:3] == ["a", "<", "ux"]


def test_memory_primaries():
    assert one_expr("load(int8u, addrsymbol(tab, 3))") == Load(Chunk.INT8U, Const(AddrSymbol("tab", 3)))
    assert one_expr("&tab") == Const(AddrSymbol("tab", 0))


@pytest.mark.parametrize("src, line", [
    ("1: x = -> 2", 1),
    ("1: x = 1 -> 2\n2: if x -> 1\n", 2),
    ("1: x = 99999999999 -> 1", 1),
    ("1: skip -> 1\n2: x = (1 + ) -> 1", 2),
    ("1: load = 3 -> 1", 1),
    ("1: store(int64, addrstack(0), 1) -> 1", 1),
])
def test_parse_errors_carry_position(src, line):
    with pytest.raises(ParseError) as exc:
        parse(src)
    assert exc.value.line == line


@pytest.mark.parametrize("src", [
    "1: skip -> 2",                                              # dangling successor
    "1: skip -> 1\n1: return",                                   # duplicate node
    "function f(a, a) { 1: return }",                            # duplicate parameter
    "global f 4\nfunction f() { 1: return }",                    # symbol clash
    "function main() entry 7 { 1: return }",                     # missing entry
])
def test_semantic_errors(src):
    with pytest.raises(SemanticError):
        parse(src)


@settings(max_examples=150)
@given(st.integers(0, 10 ** 6))
def test_generated_programs_round_trip(seed):
    p = generate(seed)
    text = format_program(p)
    assert parse(text) == p
    assert format_program(parse(text)) == text


def test_example_files_parse():
    import pathlib
    root = pathlib.Path(__file__).resolve().parent.parent / "programs"
    files = sorted(root.glob("*.cfg"))
    assert files
    for path in files:
        p = parse(path.read_text())
        assert parse(format_program(p)) == p


def test_format_expr_parenthesizes_nested():
    e = one_expr("(a + b) * (c ? 1 : 2)")
    assert format_expr(e) == "(a + b) * (c ? 1 : 2)"
    assert one_expr(format_expr(e)) == e
