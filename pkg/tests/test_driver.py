import random

import pytest
from hypothesis import given, settings, strategies as st

from esk.behavioral import cbs_step
from esk.errors import NonConstructive
from esk.events import BOT, MINUS, PLUS, Event
from esk.gen import random_event, random_program
from esk.kernel import Const, Emit, If, Par, SignalDecl, free_signals
from esk.driver import (
    CONSTRUCTIVE,
    DEADLOCK,
    NON_CAUSAL,
    NONDETERMINISTIC,
    Deadlock,
    Nondeterministic,
    ProgramInterface,
    classify,
    format_trace,
    observable,
    parse_inputs,
    parse_program,
    react,
    react_cbs,
    react_lbs,
    run,
    settle,
)
from esk.syntax import parse

from conftest import ev


def _probe(P):
    # Declare every output locally and copy its status onto a fresh signal.
    body = P.body
    for o in reversed(P.outputs):
        body = SignalDecl(o, Par(body, If(o, Emit("seen_" + o), Const(0))))
    return body


def _interface(seed):
    rng = random.Random(seed)
    p = random_program(seed, 4)
    outs = [s for s in sorted(free_signals(p)) if rng.random() < 0.5]
    P = ProgramInterface.infer(p, outs)
    return P, random_event(rng, P.inputs)


@settings(max_examples=300)
@given(st.integers(0, 10**6))
def test_outputs_match_local_declarations(seed):
    P, I = _interface(seed)
    try:
        r = react_cbs(P, I)
        got = (r.outputs, r.code)
        # each round of the fixpoint decides at least one output
        assert r.iterations <= len(P.outputs)
    except NonConstructive:
        got = None
    E = Event(I.bindings + tuple(("seen_" + o, MINUS) for o in P.outputs))
    try:
        t = cbs_step(_probe(P), E)
        expected = (Event(tuple((o, t.output["seen_" + o]) for o in P.outputs)), t.code)
    except NonConstructive:
        expected = None
    assert got == expected


@settings(max_examples=200)
@given(st.integers(0, 10**6))
def test_constructive_reaction_is_logical(seed):
    P, I = _interface(seed)
    try:
        r = react_cbs(P, I)
    except NonConstructive:
        return
    logical = react_lbs(P, I)
    assert (r.outputs, r.code) in {(x.outputs, x.code) for x in logical}


def test_run_pauses_then_emits():
    P = ProgramInterface.infer(parse("1 ; !o"), ["o"])
    for engine in ("cbs", "css", "micro", "lbs"):
        trace = run(P, [Event(), Event()], engine)
        assert observable(trace) == [(Event(), ev(o="-"), 1), (Event(), ev(o="+"), 0)]


def test_run_stops_on_termination():
    P = ProgramInterface.infer(parse("!o"), ["o"])
    assert len(run(P, [None, None, None])) == 1


def test_inputs_default_to_absent():
    P = ProgramInterface.infer(parse("a ? !o : 0"), ["o"])
    assert P.input_event() == ev(a="-")
    assert run(P, [{"a": PLUS}])[0].outputs == ev(o="+")
    with pytest.raises(ValueError):
        P.input_event({"o": PLUS})


def test_output_feedback():
    # the body sees its own emission of o
    P = ProgramInterface.infer(parse("!o ; (o ? !p : 0)"), ["o", "p"])
    assert react_cbs(P, Event()).outputs == ev(o="+", p="+")


def test_settle_leaves_undecided_outputs():
    P = ProgramInterface.infer(parse("o ? !o : !o"), ["o"])
    E, _ = settle(P.body, Event(), P.outputs)
    assert E["o"] is BOT
    with pytest.raises(NonConstructive) as info:
        run(P, [Event()])
    assert info.value.instant == 0


def test_engine_errors_carry_the_instant():
    P = ProgramInterface.infer(parse("1 ; (o ? !o : !o)"), ["o"])
    with pytest.raises(NonConstructive) as info:
        run(P, [Event(), Event()], "css")
    assert info.value.instant == 1


def test_lbs_engine():
    P = ProgramInterface.infer(parse("s ? !s : 0"), ["s"])
    with pytest.raises(Nondeterministic):
        react(P, P.body, Event(), "lbs")
    P = ProgramInterface.infer(parse("s ? 0 : !s"), ["s"])
    with pytest.raises(Deadlock):
        react(P, P.body, Event(), "lbs")


def test_micro_rejects_loops():
    P = ProgramInterface.infer(parse("(1 ; !o)°"), ["o"])
    with pytest.raises(ValueError):
        run(P, [Event()], "micro")


@pytest.mark.parametrize("text, kind, count", [
    ("output s;\ns ? 0 : !s", DEADLOCK, 0),
    ("output s;\ns ? !s : 0", NONDETERMINISTIC, 2),
    ("output s;\ns ? !s : !s", NON_CAUSAL, 1),
    ("input a;\noutput o;\na ? !o : 0", CONSTRUCTIVE, 1),
])
def test_classify(text, kind, count):
    v = classify(parse_program(text))
    assert (v.kind, v.reactions) == (kind, count)


def test_parse_program():
    P = parse_program("input a, b;\noutput o;\npause ; emit o")
    assert (P.inputs, P.outputs) == (("a", "b"), ("o",))
    assert parse_program("!o ; a ? 0 : 1").inputs == ("a", "o")
    with pytest.raises(ValueError):
        parse_program("input a;\n!o")
    with pytest.raises(ValueError):
        ProgramInterface(("a",), ("a",), Const(0))


def test_parse_inputs_and_trace():
    assert parse_inputs("a=+\n\n# nothing\nb,- a,+\n") == [ev(a="+"), Event(), Event(), ev(b="-", a="+")]
    P = ProgramInterface.infer(parse("1 ; !o"), ["o"])
    assert format_trace(run(P, [None, None])) == " ⊢ o=- | 1\n ⊢ o=+ | 0\n"


def test_partial_input_event():
    P = ProgramInterface.infer(parse("a ? !o : 0"), ["o"])
    with pytest.raises(NonConstructive):
        react_cbs(P, ev(a="?"))
    assert react_cbs(P, ev(a="+")).outputs == ev(o="+")
    assert react_cbs(P, {"a": MINUS}).outputs == ev(o="-")
