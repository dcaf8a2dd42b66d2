import pytest
from hypothesis import given, strategies as st

from esk.errors import ParseError
from esk.kernel import (
    NOTHING,
    AwaitImmediate,
    Const,
    Emit,
    If,
    Loop,
    Par,
    Seq,
    Shift,
    SignalDecl,
    Suspend,
    Trap,
    delta,
    down_code,
    free_signals,
    par_code,
    up_code,
)
from esk.syntax import SYMBOLIC, TEXTUAL, parse, parse_any, print_statement

from conftest import statements

codes = st.integers(0, 40)


# -- completion codes --------------------------------------------------------


@pytest.mark.parametrize("k, expected", [(0, 0), (1, 1), (2, 0), (3, 2), (5, 4)])
def test_down_code(k, expected):
    assert down_code(k) == expected


@pytest.mark.parametrize("k, expected", [(0, 0), (1, 1), (2, 3), (7, 8)])
def test_up_code(k, expected):
    assert up_code(k) == expected


@pytest.mark.parametrize("a, b, expected", [(0, 0, 0), (1, 0, 1), (3, 1, 3)])
def test_par_code(a, b, expected):
    assert par_code(a, b) == expected


def test_delta():
    assert delta(1, Loop(Const(1))) == Loop(Const(1))
    assert delta(0, Emit("s")) == NOTHING
    assert delta(4, Trap(Const(1))) == NOTHING


@given(codes)
def test_down_undoes_up(k):
    assert down_code(up_code(k)) == k


@given(codes, codes, codes)
def test_par_code_is_a_semilattice(a, b, c):
    assert par_code(a, b) == par_code(b, a)
    assert par_code(a, par_code(b, c)) == par_code(par_code(a, b), c)
    assert par_code(a, a) == a
    assert par_code(a, 0) == a


@given(codes, statements)
def test_delta_keeps_only_on_pause(k, p):
    assert (delta(k, p) == p) == (k == 1 or p == NOTHING)


def test_negative_code_rejected():
    with pytest.raises(ValueError):
        Const(-1)
    with pytest.raises(ValueError):
        down_code(-1)


def test_free_signals_respect_scope():
    p = SignalDecl("s", Par(Emit("s"), If("a", Emit("o"), AwaitImmediate("s"))))
    assert free_signals(p) == {"a", "o"}
    assert free_signals(Suspend("b", Const(1))) == {"b"}


# -- concrete syntax ----------------------------------------------------------


@pytest.mark.parametrize("text, expected", [
    ("0", Const(0)),
    ("1", Const(1)),
    ("!s", Emit("s")),
    ("3", Const(3)),
    ("p ? 0 : 1", If("p", Const(0), Const(1))),
    ("s ⊃ 1", Suspend("s", Const(1))),
    ("1 ; !o ; 0", Seq(Const(1), Seq(Emit("o"), Const(0)))),
    ("1 || 0 ; 1", Par(Const(1), Seq(Const(0), Const(1)))),
    ("1°", Loop(Const(1))),
    ("(!a ; 1)*", Loop(Seq(Emit("a"), Const(1)))),
    ("{2}", Trap(Const(2))),
    ("↑{3}", Shift(Trap(Const(3)))),
    ("s \\ !s", SignalDecl("s", Emit("s"))),
    ("awimm s", AwaitImmediate("s")),
    ("awimm ¬s", AwaitImmediate("s", False)),
    ("awimm ~s", AwaitImmediate("s", False)),
])
def test_parse_symbolic(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("text, expected", [
    ("nothing", Const(0)),
    ("pause ; emit o", Seq(Const(1), Emit("o"))),
    ("trap T in loop if s then exit T^2 else pause end end end",
     Trap(Loop(If("s", Const(2), Const(1))))),
    ("trap T in trap U in exit T end end", Trap(Trap(Const(3)))),
    ("suspend pause when s end", Suspend("s", Const(1))),
    ("signal s in [emit s || await immediate not s] end",
     SignalDecl("s", Par(Emit("s"), AwaitImmediate("s", False)))),
    ("if s then emit o end", If("s", Emit("o"), Const(0))),
    ("trap T in {↑2} end", Trap(Shift(Const(2)))),
])
def test_parse_textual(text, expected):
    assert parse(text, TEXTUAL) == expected


@pytest.mark.parametrize("text, message", [
    ("trap T in exit U end", "unbound trap name"),
    ("trap T in exit T^1 end", "exit code 1 < 2"),
    ("trap T in exit T^3 end", "does not match"),
    ("if s then pause", "end"),
])
def test_textual_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse(text, TEXTUAL)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse("1 ;\n  ;")
    assert (info.value.line, info.value.col) == (2, 3)


def test_parse_any_accepts_both_forms():
    assert parse_any("pause ; emit o") == parse_any("1 ; !o")


def test_print_forms():
    assert print_statement(Const(1)) == "1"
    assert print_statement(Const(1), TEXTUAL) == "pause"
    assert "||" in print_statement(Par(Const(0), Const(1)))


@given(statements)
def test_symbolic_round_trip(p):
    assert parse(print_statement(p, SYMBOLIC)) == p


@given(statements)
def test_textual_round_trip(p):
    assert parse(print_statement(p, TEXTUAL), TEXTUAL) == p


@pytest.mark.parametrize("text", ["s \\ (s ? 0 : !s)", "s \\ (s ? !s : 0)", "s \\ (s ? !s : !s)"])
def test_round_trip_on_the_pathological_programs(text):
    p = parse(text)
    for form in (SYMBOLIC, TEXTUAL):
        assert parse(print_statement(p, form), form) == p
