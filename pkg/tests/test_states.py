from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from esk.behavioral import cbs_step
from esk.errors import NonConstructive, ParseError
from esk.events import Event
from esk.kernel import NOTHING, Const, Emit, Par, Seq
from esk.states import (
    ActiveAwait,
    ActivePause,
    SeqRight,
    SignalState,
    SuspendState,
    base,
    check_state_transition,
    css_depth,
    css_step,
    css_surface,
    expand,
    is_state,
    lss_depth,
    lss_surface,
    parse_term,
    print_term,
)
from esk.syntax import parse

from conftest import ev, program_and_event


def test_surface_pause():
    t = css_surface(Const(1), Event())
    assert (t.code, t.derivative) == (1, ActivePause())


def test_surface_exit_leaves_inert_term():
    t = css_surface(Par(Const(1), Const(3)), Event())
    assert (t.code, t.derivative) == (3, Par(Const(1), Const(3)))


def test_surface_keeps_the_finished_left_side():
    t = css_surface(Seq(Emit("s"), Const(1)), ev(s="?"))
    assert t.derivative == SeqRight(Emit("s"), ActivePause())
    assert t.output == ev(s="+")


def test_depth_examples():
    t = css_depth(ActivePause(), Event())
    assert (t.code, t.derivative) == (0, Const(1))
    σ = SuspendState("s", ActivePause())
    t = css_depth(σ, ev(s="+"))
    assert (t.code, t.derivative) == (1, σ)
    t = css_depth(ActiveAwait("s"), ev(s="+"))
    assert (t.code, t.derivative) == (0, parse("awimm s"))
    t = css_depth(ActiveAwait("s"), ev(s="-"))
    assert (t.code, t.derivative) == (1, ActiveAwait("s"))


def test_depth_resumes_after_pause():
    t = css_depth(parse_term("^1 ; !o"), ev(o="-"))
    assert (t.output, t.code, t.derivative) == (ev(o="+"), 0, parse("1 ; !o"))


def test_depth_local_signal():
    σ = parse_term("s \\ (^1 ; !s || ^awimm s)")
    assert isinstance(σ, SignalState)
    t = css_depth(σ, Event())
    assert (t.code, t.derivative) == (0, parse("s \\ (1 ; !s || awimm s)"))


def test_logical_depth_branches():
    ts = lss_depth(parse_term("s \\ (^1 ; (s ? !s : 0))"), Event())
    assert len(ts) == 2


def test_expand_and_base():
    σ = parse_term("^1 ; !o")
    assert base(σ) == parse("1 ; !o")
    assert expand(σ) == parse("0 ; !o")
    assert expand(parse_term("(^1 ; !o)°")) == parse("(0 ; !o) ; (1 ; !o)°")
    assert base(NOTHING) == NOTHING


def test_css_step_dispatch():
    assert css_step(Const(1), Event()).derivative == ActivePause()
    assert css_step(ActivePause(), Event()).code == 0


def test_term_printing():
    for text in ("^1 ; !o", "s \\ (^1 ; !s || ^awimm s)", "s ⊃ ^awimm ¬s", "(^1 ; !o)°", "{^1 || 2}"):
        t = parse_term(text)
        assert is_state(t)
        assert parse_term(print_term(t)) == t
    assert print_term(Const(1)) == "1"


def test_term_parser_rejects_two_active_sides():
    with pytest.raises(ParseError):
        parse_term("^1 ; ^1")


def test_check_state_transition_flags_problems():
    t = css_surface(Const(1), Event())
    assert check_state_transition(Const(1), Event(), t) == []
    bad = replace(t, code=0)
    assert check_state_transition(Const(1), Event(), bad) != []


def _walk(p, E, instants):
    """Run a statement through css for a few instants, yielding each state reached."""
    t = css_surface(p, E)
    yield p, t
    for _ in range(instants):
        if t.code != 1:
            return
        σ = t.derivative
        t = css_depth(σ, E)
        yield σ, t


@settings(max_examples=200)
@given(program_and_event(), st.integers(1, 4))
def test_state_transitions_are_well_formed(case, n):
    p, E = case
    try:
        for start, t in _walk(p, E, n):
            assert check_state_transition(start, E, t) == []
            assert t in (lss_surface(start, E) if not is_state(start) else lss_depth(start, E))
    except NonConstructive:
        pass


@settings(max_examples=200)
@given(program_and_event(), st.integers(1, 4))
def test_states_react_like_their_expansion(case, n):
    # one instant from a state agrees with one behavioral step of its expansion
    p, E = case
    try:
        for start, t in _walk(p, E, n):
            if not is_state(start):
                b = cbs_step(start, E)
            else:
                b = cbs_step(expand(start), E)
            assert (b.output, b.code) == (t.output, t.code)
    except NonConstructive:
        pass
