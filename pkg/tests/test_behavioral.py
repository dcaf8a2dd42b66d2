import pytest
from hypothesis import given, settings

from esk.behavioral import (
    Transition,
    cbs_step,
    check_potentials,
    check_transition,
    lbs_check,
    lbs_transitions,
)
from esk.errors import Blocked, InstantaneousLoop, NonConstructive, UnboundSignal
from esk.events import MINUS, PLUS, Event, c_to_k
from esk.kernel import NOTHING, Const, Emit, If, Par, SignalDecl
from esk.syntax import parse

from conftest import ev, program_and_event


def outcomes(p, E):
    return {(t.output, t.code, t.derivative) for t in lbs_transitions(p, E)}


def test_deadlock_has_no_reaction():
    assert lbs_transitions(parse("s \\ (s ? 0 : !s)"), Event()) == frozenset()


def test_self_justified_emission_has_two_reactions():
    ts = lbs_transitions(parse("s \\ (s ? !s : 0)"), Event())
    assert len(ts) == 2
    assert {t.choices for t in ts} == {(("s", PLUS),), (("s", MINUS),)}
    assert {t.code for t in ts} == {0}


def test_non_causal_has_one_reaction():
    p = parse("s \\ (s ? !s : !s)")
    assert len(lbs_transitions(p, Event())) == 1
    with pytest.raises(NonConstructive):
        cbs_step(p, Event())


def test_causality_loop_rejected():
    with pytest.raises(NonConstructive) as info:
        cbs_step(parse("s \\ (s ? !s : !o)"), ev(o="-"))
    assert info.value.signals == ("s",)


def test_backward_dependency():
    # Logically the later emission decides the earlier test: one reaction,
    # through the then branch. Constructively the test cannot wait for it.
    p = parse("s \\ ((s ? !o : !o2) ; !s)")
    E = ev(o="-", o2="-")
    assert outcomes(p, E) == {(ev(o="+", o2="-"), 0, NOTHING)}
    with pytest.raises(NonConstructive):
        cbs_step(p, E)


def test_cbs_examples():
    t = cbs_step(Par(Const(1), Const(3)), Event())
    assert (t.code, t.derivative) == (3, NOTHING)
    t = cbs_step(parse("s \\ (!s ; s ? !o : !o2)"), ev(o="-", o2="-"))
    assert (t.output, t.code) == (ev(o="+", o2="-"), 0)


@pytest.mark.parametrize("text, code, derivative", [
    ("1 ; !o", 1, "0 ; !o"),
    ("!o ; 1", 1, "0"),
    ("s ⊃ 1", 1, "awimm ¬s ; s ⊃ 0"),
    ("(1 ; !o)°", 1, "(0 ; !o) ; (1 ; !o)°"),
    ("{1 || 2}", 0, "0"),
    ("{{3} ; 1}", 0, "0"),
    ("{↑2 ; 1}", 2, "0"),
    ("1 || awimm s", 1, "0 || awimm s"),
])
def test_derivatives(text, code, derivative):
    t = cbs_step(parse(text), ev(o="-", s="-"))
    assert (t.code, t.derivative) == (code, parse(derivative))


def test_emission_outside_scope():
    with pytest.raises(UnboundSignal):
        cbs_step(Emit("o"), Event())


def test_blocked_test():
    with pytest.raises(Blocked):
        cbs_step(If("a", Const(0), Const(1)), ev(a="?"))


def test_instantaneous_loop():
    assert lbs_transitions(parse("0°"), Event()) == frozenset()
    with pytest.raises(InstantaneousLoop):
        cbs_step(parse("0°"), Event())


def test_output_is_total_even_with_unknown_inputs():
    t = cbs_step(parse("!o ; 1"), ev(o="?", a="?"))
    assert t.output == ev(o="+", a="-")


def test_shadowing_restricts_outer_signal():
    # the inner s is emitted; the outer s, hidden, is reported absent
    t = cbs_step(SignalDecl("s", Emit("s")), ev(s="?"))
    assert t.output == ev(s="-")


def test_lbs_check_rejects_foreign_transition():
    p = parse("s \\ (s ? !s : 0)")
    bogus = Transition(Event(), 1, NOTHING)
    assert not lbs_check(p, Event(), bogus)


def test_transition_str():
    t = cbs_step(parse("!o ; 1"), ev(o="-"))
    assert str(t) == "o=+ | 1 | 0"


@settings(max_examples=200)
@given(program_and_event())
def test_constructive_refines_logical(case):
    p, E = case
    try:
        t = cbs_step(p, E)
    except NonConstructive:
        return
    assert lbs_check(p, c_to_k(E), t)


@settings(max_examples=200)
@given(program_and_event())
def test_structure_of_every_transition(case):
    p, E = case
    for t in lbs_transitions(p, E):
        assert check_transition(p, E, t) == []
        assert check_potentials(p, E, t) == []
    try:
        t = cbs_step(p, E)
    except NonConstructive:
        return
    assert check_transition(p, E, t) == []
    assert check_potentials(p, E, t) == []
    assert cbs_step(p, E) == t


@settings(max_examples=100)
@given(program_and_event(total=False))
def test_partial_inputs(case):
    p, E = case
    try:
        t = cbs_step(p, E)
    except (NonConstructive, Blocked):
        return
    assert t.output.is_total()
    assert check_potentials(p, E, t) == []
