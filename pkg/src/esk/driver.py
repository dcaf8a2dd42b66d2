"""Multi-instant reactions of whole programs.

Outputs are the program-level feedback loop: an output emitted by the body is
seen as present by the body in the same instant. Constructively, output
statuses are settled by iterating Must/Can over the body until they stop
changing, which is what wrapping the body in one declaration per output does.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from esk import potentials
from esk.behavioral import Transition, cbs_step, lbs_transitions
from esk.errors import EskError, NonConstructive, NoReaction
from esk.events import BOT, MINUS, PLUS, Event
from esk.kernel import Statement, free_signals, has_loop
from esk.states import Term, css_step, expand, is_state

ENGINES = ("lbs", "cbs", "css", "micro")


class Deadlock(NoReaction):
    def __init__(self):
        super().__init__("no logically coherent reaction")


class Nondeterministic(NoReaction):
    def __init__(self, count: int):
        self.count = count
        super().__init__(f"{count} logically coherent reactions")


@dataclass(frozen=True)
class ProgramInterface:
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    body: Statement

    def __post_init__(self):
        clash = set(self.inputs) & set(self.outputs)
        if clash:
            raise ValueError(f"signals both input and output: {sorted(clash)}")
        unknown = free_signals(self.body) - set(self.inputs) - set(self.outputs)
        if unknown:
            raise ValueError(f"undeclared signals: {sorted(unknown)}")

    @classmethod
    def infer(cls, body: Statement, outputs: Iterable[str] = ()) -> ProgramInterface:
        """Every free signal that is not an output is an input."""
        outputs = tuple(outputs)
        inputs = tuple(sorted(free_signals(body) - set(outputs)))
        return cls(inputs, outputs, body)

    def with_body(self, body: Statement) -> ProgramInterface:
        return ProgramInterface(self.inputs, self.outputs, body)

    def input_event(self, assignment: Event | dict | None = None) -> Event:
        """Total event over the inputs; missing inputs are absent."""
        if assignment is None:
            given = {}
        elif isinstance(assignment, Event):
            given = assignment.visible()
        else:
            given = dict(assignment)
        unknown = set(given) - set(self.inputs)
        if unknown:
            raise ValueError(f"not input signals: {sorted(unknown)}")
        return Event(tuple((s, given.get(s, MINUS)) for s in self.inputs))


@dataclass(frozen=True)
class Reaction:
    inputs: Event
    outputs: Event
    code: int | None
    residue: object
    choices: tuple = ()
    iterations: int = 0

    def line(self) -> str:
        code = "-" if self.code is None else self.code
        return f"{self.inputs.serialize()} ⊢ {self.outputs.serialize()} | {code}"


def _split(P: ProgramInterface, E: Event) -> Event:
    """Output part of an event over inputs then outputs."""
    return Event(E.bindings[len(P.inputs):])


def settle(source: Statement, I: Event, outputs: Sequence[str]) -> tuple[Event, int]:
    """Decide as many outputs of ``source`` under inputs ``I`` as Must/Can allow.

    Returns the event over inputs and outputs (undecided outputs stay BOT)
    and the number of iterations that decided at least one output.
    """
    E = Event(I.bindings + tuple((o, BOT) for o in outputs))
    iterations = 0
    while True:
        undecided = [o for o in outputs if E[o] is BOT]
        if not undecided:
            return E, iterations
        m = potentials.must(source, E)
        c = potentials.can(PLUS, source, E)
        changed = False
        for o in undecided:
            if o in m.signals:
                E, changed = E.set(o, PLUS), True
            elif o not in c.signals:
                E, changed = E.set(o, MINUS), True
        if not changed:
            return E, iterations
        iterations += 1


def output_fixpoint(source: Statement, I: Event, outputs: Sequence[str]) -> tuple[Event, int]:
    """Like :func:`settle`, but every output must be decided."""
    E, iterations = settle(source, I, outputs)
    undecided = [o for o in outputs if E[o] is BOT]
    if undecided:
        raise NonConstructive(*undecided)
    return E, iterations


def _check_readback(P: ProgramInterface, E: Event, t: Transition):
    for o in P.outputs:
        assert t.output[o] is E[o], f"output {o} settled to {E[o]} but the body gives {t.output[o]}"


def react_cbs(P: ProgramInterface, I: Event) -> Reaction:
    I = P.input_event(I)
    E, iterations = output_fixpoint(P.body, I, P.outputs)
    t = cbs_step(P.body, E)
    _check_readback(P, E, t)
    return Reaction(I, _split(P, t.output), t.code, t.derivative, t.choices, iterations)


def react_css(P: ProgramInterface, term: Term, I: Event) -> Reaction:
    I = P.input_event(I)
    source = expand(term) if is_state(term) else term
    E, iterations = output_fixpoint(source, I, P.outputs)
    t = css_step(term, E)
    _check_readback(P, E, t)
    return Reaction(I, _split(P, t.output), t.code, t.derivative, t.choices, iterations)


def react_lbs(P: ProgramInterface, I: Event) -> list[Reaction]:
    """Every coherent reaction: the outputs guessed are exactly those emitted."""
    I = P.input_event(I)
    found = []
    for guess in itertools.product((PLUS, MINUS), repeat=len(P.outputs)):
        E = Event(I.bindings + tuple(zip(P.outputs, guess)))
        for t in lbs_transitions(P.body, E):
            if all(t.output[o] is E[o] for o in P.outputs):
                found.append(Reaction(I, _split(P, t.output), t.code, t.derivative,
                                      tuple(zip(P.outputs, guess)) + t.choices))
    return sorted(set(found), key=lambda r: (str(r.outputs), r.code, str(r.choices)))


def react_micro(P: ProgramInterface, term: Term, I: Event, schedule: str = "first",
                seed: int | None = None, on_step=None, on_normal_form=None) -> Reaction:
    from esk.microstep import (
        RESUME,
        START,
        from_term,
        is_total,
        micro_run,
        set_gr,
        signal_status,
        to_term,
    )

    I = P.input_event(I)
    m = set_gr(from_term(term), RESUME if is_state(term) else START)
    nf = micro_run(I, m, schedule, seed=seed, feedback=P.outputs, on_step=on_step)
    if on_normal_form is not None:
        on_normal_form(nf)
    if not is_total(nf):
        undecided = [o for o in P.outputs if signal_status(nf, o) is BOT]
        raise NonConstructive(*(undecided or ["(internal)"]))
    domain = Event(I.bindings + tuple((o, MINUS) for o in P.outputs))
    t, code, out = to_term(nf, domain)
    return Reaction(I, _split(P, out), code, t)


def react(P: ProgramInterface, residue, I: Event, engine: str, **micro) -> Reaction:
    """One reaction of ``residue``; ``micro`` options go to :func:`react_micro`."""
    if engine == "cbs":
        return react_cbs(P.with_body(residue), I)
    if engine == "lbs":
        results = react_lbs(P.with_body(residue), I)
        if not results:
            raise Deadlock()
        if len(results) > 1:
            raise Nondeterministic(len(results))
        return results[0]
    if engine == "css":
        return react_css(P, residue, I)
    if engine == "micro":
        return react_micro(P, residue, I, **micro)
    raise ValueError(f"unknown engine {engine!r}")


def run(P: ProgramInterface, inputs: Sequence[Event | dict | None], engine: str = "cbs",
        **micro) -> list[Reaction]:
    """Chain reactions until the program stops pausing or the inputs run out.

    Errors carry the index of the failing instant in ``instant`` and what was
    left to run in ``residue``.
    """
    if engine == "micro" and has_loop(P.body):
        raise ValueError("the microstep engine does not handle loops")
    trace = []
    residue = P.body
    for n, I in enumerate(inputs):
        try:
            r = react(P, residue, I, engine, **micro)
        except EskError as e:
            e.instant = n
            e.residue = residue
            raise
        trace.append(r)
        if r.code != 1:
            break
        residue = r.residue
    return trace


def observable(trace: Sequence[Reaction]) -> list[tuple[Event, Event, int | None]]:
    return [(r.inputs, r.outputs, r.code) for r in trace]


# -- classification -------------------------------------------------------

CONSTRUCTIVE = "constructive"
NON_CAUSAL = "non-causal"
NONDETERMINISTIC = "nondeterministic"
DEADLOCK = "deadlock"


@dataclass
class Verdict:
    kind: str
    inputs: Event
    reactions: int
    detail: str = ""


def classify_instant(P: ProgramInterface, I: Event) -> Verdict:
    reactions = react_lbs(P, I)
    I = P.input_event(I)
    if not reactions:
        return Verdict(DEADLOCK, I, 0)
    if len(reactions) >= 2:
        return Verdict(NONDETERMINISTIC, I, len(reactions))
    try:
        react_cbs(P, I)
    except NoReaction as e:
        return Verdict(NON_CAUSAL, I, 1, str(e))
    return Verdict(CONSTRUCTIVE, I, 1)


def classify(P: ProgramInterface, max_inputs: int = 10) -> Verdict:
    """Classify the first instant over every input assignment; report the first problem."""
    if len(P.inputs) > max_inputs:
        raise ValueError(f"too many inputs to enumerate ({len(P.inputs)})")
    verdict = None
    for values in itertools.product((MINUS, PLUS), repeat=len(P.inputs)):
        v = classify_instant(P, Event(tuple(zip(P.inputs, values))))
        if v.kind != CONSTRUCTIVE:
            return v
        verdict = verdict or v
    return verdict


# -- files ----------------------------------------------------------------

_HEADER = re.compile(r"\s*(input|output)\b([^;]*);")


def parse_program(text: str) -> ProgramInterface:
    """Optional ``input a b;`` / ``output o;`` headers, then the body."""
    from esk.syntax import parse_any

    declared = {"input": [], "output": []}
    pos = 0
    while True:
        m = _HEADER.match(text, pos)
        if not m:
            break
        declared[m.group(1)] += m.group(2).replace(",", " ").split()
        pos = m.end()
    body = parse_any(text[pos:])
    outputs = tuple(declared["output"])
    if declared["input"]:
        return ProgramInterface(tuple(declared["input"]), outputs, body)
    return ProgramInterface.infer(body, outputs)


def parse_inputs(text: str) -> list[Event]:
    events = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        events.append(Event.parse(line) if line else Event())
    return events


def format_trace(trace: Sequence[Reaction]) -> str:
    return "".join(r.line() + "\n" for r in trace)
