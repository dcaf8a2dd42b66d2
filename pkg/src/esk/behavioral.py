"""Logical (LBS) and constructive (CBS) behavioral semantics.

Both are computed by one recursive generator over the rules. The two
semantics differ only at signal declarations: LBS tries both statuses and
keeps the coherent ones, CBS picks the status justified by Must/Can or fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from esk import potentials
from esk.errors import Blocked, InstantaneousLoop, NonConstructive, UnboundSignal
from esk.events import BOT, MINUS, PLUS, Event, Status
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
    Statement,
    Suspend,
    Trap,
    delta,
    down_code,
    up_code,
)

LOGICAL = "logical"
CONSTRUCTIVE = "constructive"

# A derivation result: output event, code, derivative, and the statuses picked
# at the signal declarations crossed (in evaluation order).
Choices = tuple[tuple[str, Status], ...]


@dataclass(frozen=True, slots=True)
class Transition:
    output: Event
    code: int
    derivative: object
    # Two derivations reaching the same (output, code, derivative) through
    # different signal choices are different reactions.
    choices: Choices = field(default=())

    def key(self):
        return (self.output, self.code, self.derivative)

    def __str__(self):
        from esk.states import print_term

        return f"{self.output.serialize()} | {self.code} | {print_term(self.derivative)}"


def par_derivative(k: int, left: Statement, right: Statement) -> Statement:
    return delta(k, Par(left, right))


def read_status(E: Event, s: str) -> Status:
    st = E[s]
    if st is BOT:
        raise Blocked(s)
    return st


def signal_statuses(s: str, potential_source: Statement, E: Event, mode: str) -> tuple[Status, ...]:
    """Statuses to try for a declared signal ``s``.

    ``potential_source`` is the statement whose Must/Can justify the choice
    (the body itself, or the expansion of a state).
    """
    if mode == LOGICAL:
        return (PLUS, MINUS)
    inner = E.add(s, BOT)
    if s in potentials.must(potential_source, inner).signals:
        return (PLUS,)
    if s not in potentials.can(PLUS, potential_source, inner).signals:
        return (MINUS,)
    raise NonConstructive(s)


def emit_event(E: Event, s: str) -> Event:
    if s not in E:
        raise UnboundSignal(s)
    return E.empty().set(s, PLUS)


def derive(p: Statement, E: Event, mode: str) -> Iterator[tuple[Event, int, Statement, Choices]]:
    if isinstance(p, Const):
        yield E.empty(), p.k, NOTHING, ()
    elif isinstance(p, Emit):
        yield emit_event(E, p.s), 0, NOTHING, ()
    elif isinstance(p, AwaitImmediate):
        st = read_status(E, p.s)
        if not p.positive:
            st = st.neg()
        if st is PLUS:
            yield E.empty(), 0, NOTHING, ()
        else:
            yield E.empty(), 1, p, ()
    elif isinstance(p, If):
        branch = p.then if read_status(E, p.s) is PLUS else p.else_
        yield from derive(branch, E, mode)
    elif isinstance(p, Suspend):
        for E1, k, d, ch in derive(p.body, E, mode):
            yield E1, k, delta(k, Seq(AwaitImmediate(p.s, False), Suspend(p.s, d))), ch
    elif isinstance(p, Seq):
        for E1, k, d, ch in derive(p.left, E, mode):
            if k != 0:
                yield E1, k, delta(k, Seq(d, p.right)), ch
            else:
                for E2, k2, d2, ch2 in derive(p.right, E, mode):
                    yield E1.union(E2), k2, d2, ch + ch2
    elif isinstance(p, Par):
        rights = None
        for E1, k1, d1, ch1 in derive(p.left, E, mode):
            if rights is None:
                rights = list(derive(p.right, E, mode))
            for E2, k2, d2, ch2 in rights:
                k = max(k1, k2)
                yield E1.union(E2), k, par_derivative(k, d1, d2), ch1 + ch2
    elif isinstance(p, Loop):
        for E1, k, d, ch in derive(p.body, E, mode):
            if k == 0:
                if mode == CONSTRUCTIVE:
                    raise InstantaneousLoop()
                continue
            yield E1, k, delta(k, Seq(d, p)), ch
    elif isinstance(p, Trap):
        for E1, k, d, ch in derive(p.body, E, mode):
            yield E1, down_code(k), delta(k, Trap(d)), ch
    elif isinstance(p, Shift):
        for E1, k, d, ch in derive(p.body, E, mode):
            yield E1, up_code(k), delta(k, Shift(d)), ch
    elif isinstance(p, SignalDecl):
        for st in signal_statuses(p.s, p.body, E, mode):
            for E1, k, d, ch in derive(p.body, E.add(p.s, st), mode):
                if E1[p.s] is not st:
                    # SigP needs s emitted, SigM needs it silent. Under CBS
                    # this cannot happen (Must/Can are correct).
                    assert mode == LOGICAL, f"incoherent constructive choice for {p.s}"
                    continue
                yield E1.restrict(p.s), k, delta(k, SignalDecl(p.s, d)), ((p.s, st),) + ch
    else:
        raise TypeError(f"not a statement: {p!r}")


def lbs_transitions(p: Statement, E: Event) -> frozenset[Transition]:
    return frozenset(Transition(E1, k, d, ch) for E1, k, d, ch in derive(p, E, LOGICAL))


def cbs_step(p: Statement, E: Event) -> Transition:
    """The unique CBS transition; raises a :class:`NoReaction` subclass otherwise."""
    results = derive(p, E, CONSTRUCTIVE)
    E1, k, d, ch = next(results)
    extra = next(results, None)
    assert extra is None, "the constructive semantics branched"
    return Transition(E1, k, d, ch)


def lbs_check(p: Statement, E: Event, t: Transition) -> bool:
    return any(u.key() == t.key() for u in lbs_transitions(p, E))


def check_transition(p: Statement, E: Event, t: Transition) -> list[str]:
    """Structural lemmas every behavioral transition must satisfy."""
    problems = []
    if t.code != 1 and t.derivative != NOTHING:
        problems.append(f"code {t.code} with live derivative")
    if t.output.domain != E.domain:
        problems.append(f"domain changed: {E.domain} -> {t.output.domain}")
    if not t.output.is_total():
        problems.append(f"output {t.output} is not total")
    return problems


def check_potentials(p: Statement, E: Event, t: Transition,
                     must: Callable = None, can: Callable = None) -> list[str]:
    """Must/Can correctness against one transition of ``p`` under ``E``."""
    must = must or potentials.must
    can = can or potentials.can
    m, c = must(p, E), can(PLUS, p, E)
    emitted = t.output.emitted()
    problems = []
    if not m.signals <= emitted:
        problems.append(f"Must signals {sorted(m.signals)} not emitted ({sorted(emitted)})")
    if not emitted <= c.signals:
        problems.append(f"emitted {sorted(emitted)} outside Can {sorted(c.signals)}")
    if t.code not in c.codes:
        problems.append(f"code {t.code} outside Can codes {sorted(c.codes)}")
    if m.codes and m.codes != {t.code}:
        problems.append(f"Must codes {sorted(m.codes)} but code {t.code}")
    return problems
