"""States, terms and the constructive/logical state semantics.

A state is a statement with activation marks on pause and awimm leaves; a
term is a state or a plain statement (execution over). ``css_surface`` starts
a statement, ``css_depth`` resumes a state. The logical variants enumerate
every derivation like :func:`esk.behavioral.lbs_transitions`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from esk.behavioral import (
    CONSTRUCTIVE,
    LOGICAL,
    Choices,
    Transition,
    emit_event,
    read_status,
    signal_statuses,
)
from esk.errors import InstantaneousLoop, ParseError
from esk.events import PLUS, Event
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
    down_code,
    up_code,
)


class State:
    """Marker base class of annotated states."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class ActivePause(State):
    pass


@dataclass(frozen=True, slots=True)
class ActiveAwait(State):
    s: str
    positive: bool = True


@dataclass(frozen=True, slots=True)
class SuspendState(State):
    s: str
    body: State


@dataclass(frozen=True, slots=True)
class IfLeft(State):
    s: str
    then: State
    else_: Statement


@dataclass(frozen=True, slots=True)
class IfRight(State):
    s: str
    then: Statement
    else_: State


@dataclass(frozen=True, slots=True)
class SeqLeft(State):
    left: State
    right: Statement


@dataclass(frozen=True, slots=True)
class SeqRight(State):
    left: Statement
    right: State


@dataclass(frozen=True, slots=True)
class ParLeft(State):
    left: State
    right: Statement


@dataclass(frozen=True, slots=True)
class ParRight(State):
    left: Statement
    right: State


@dataclass(frozen=True, slots=True)
class ParBoth(State):
    left: State
    right: State


@dataclass(frozen=True, slots=True)
class LoopState(State):
    body: State


@dataclass(frozen=True, slots=True)
class TrapState(State):
    body: State


@dataclass(frozen=True, slots=True)
class ShiftState(State):
    body: State


@dataclass(frozen=True, slots=True)
class SignalState(State):
    s: str
    body: State


Term = Union[State, Statement]


def is_state(t) -> bool:
    return isinstance(t, State)


def base(t: Term) -> Statement:
    if not isinstance(t, State):
        return t
    if isinstance(t, ActivePause):
        return Const(1)
    if isinstance(t, ActiveAwait):
        return AwaitImmediate(t.s, t.positive)
    if isinstance(t, SuspendState):
        return Suspend(t.s, base(t.body))
    if isinstance(t, (IfLeft, IfRight)):
        return If(t.s, base(t.then), base(t.else_))
    if isinstance(t, (SeqLeft, SeqRight)):
        return Seq(base(t.left), base(t.right))
    if isinstance(t, (ParLeft, ParRight, ParBoth)):
        return Par(base(t.left), base(t.right))
    if isinstance(t, LoopState):
        return Loop(base(t.body))
    if isinstance(t, TrapState):
        return Trap(base(t.body))
    if isinstance(t, ShiftState):
        return Shift(base(t.body))
    if isinstance(t, SignalState):
        return SignalDecl(t.s, base(t.body))
    raise TypeError(f"not a term: {t!r}")


def expand(σ: State) -> Statement:
    """What is left to execute in ``σ``, as a statement."""
    if isinstance(σ, ActivePause):
        return NOTHING
    if isinstance(σ, ActiveAwait):
        return AwaitImmediate(σ.s, σ.positive)
    if isinstance(σ, SuspendState):
        return Seq(AwaitImmediate(σ.s, False), expand(σ.body))
    if isinstance(σ, IfLeft):
        return expand(σ.then)
    if isinstance(σ, IfRight):
        return expand(σ.else_)
    if isinstance(σ, SeqLeft):
        return Seq(expand(σ.left), σ.right)
    if isinstance(σ, SeqRight):
        return expand(σ.right)
    if isinstance(σ, ParLeft):
        return Par(expand(σ.left), NOTHING)
    if isinstance(σ, ParRight):
        return Par(NOTHING, expand(σ.right))
    if isinstance(σ, ParBoth):
        return Par(expand(σ.left), expand(σ.right))
    if isinstance(σ, LoopState):
        return Seq(expand(σ.body), Loop(base(σ.body)))
    if isinstance(σ, TrapState):
        return Trap(expand(σ.body))
    if isinstance(σ, ShiftState):
        return Shift(expand(σ.body))
    if isinstance(σ, SignalState):
        return SignalDecl(σ.s, expand(σ.body))
    raise TypeError(f"not a state: {σ!r}")


def delta_term(k: int, t: Term) -> Term:
    return t if k == 1 else base(t)


# Rebuilding a compound node around child terms: a state if a child is one.

def suspend_term(s: str, t: Term) -> Term:
    return SuspendState(s, t) if is_state(t) else Suspend(s, t)


def if_term(s: str, then: Term, else_: Term) -> Term:
    if is_state(then):
        return IfLeft(s, then, base(else_))
    if is_state(else_):
        return IfRight(s, then, else_)
    return If(s, then, else_)


def seq_term(left: Term, right: Term) -> Term:
    if is_state(left):
        return SeqLeft(left, base(right))
    if is_state(right):
        return SeqRight(left, right)
    return Seq(left, right)


def par_term(left: Term, right: Term) -> Term:
    if is_state(left) and is_state(right):
        return ParBoth(left, right)
    if is_state(left):
        return ParLeft(left, right)
    if is_state(right):
        return ParRight(left, right)
    return Par(left, right)


def loop_term(t: Term) -> Term:
    return LoopState(t) if is_state(t) else Loop(t)


def trap_term(t: Term) -> Term:
    return TrapState(t) if is_state(t) else Trap(t)


def shift_term(t: Term) -> Term:
    return ShiftState(t) if is_state(t) else Shift(t)


def signal_term(s: str, t: Term) -> Term:
    return SignalState(s, t) if is_state(t) else SignalDecl(s, t)


def build(ctor, *args) -> Term:
    """Apply a statement constructor to child terms, producing a term."""
    table = {
        Suspend: suspend_term, If: if_term, Seq: seq_term, Par: par_term,
        Loop: loop_term, Trap: trap_term, Shift: shift_term, SignalDecl: signal_term,
    }
    return table[ctor](*args)


# -- the rules --------------------------------------------------------------

Result = tuple[Event, int, Term, Choices]


def surface(p: Statement, E: Event, mode: str) -> Iterator[Result]:
    if isinstance(p, Const):
        yield E.empty(), p.k, (ActivePause() if p.k == 1 else p), ()
    elif isinstance(p, Emit):
        yield emit_event(E, p.s), 0, p, ()
    elif isinstance(p, AwaitImmediate):
        st = read_status(E, p.s)
        if not p.positive:
            st = st.neg()
        if st is PLUS:
            yield E.empty(), 0, p, ()
        else:
            yield E.empty(), 1, ActiveAwait(p.s, p.positive), ()
    elif isinstance(p, If):
        if read_status(E, p.s) is PLUS:
            for E1, k, t, ch in surface(p.then, E, mode):
                yield E1, k, if_term(p.s, t, p.else_), ch
        else:
            for E1, k, t, ch in surface(p.else_, E, mode):
                yield E1, k, if_term(p.s, p.then, t), ch
    elif isinstance(p, Suspend):
        for E1, k, t, ch in surface(p.body, E, mode):
            yield E1, k, suspend_term(p.s, t), ch
    elif isinstance(p, Seq):
        for E1, k, t, ch in surface(p.left, E, mode):
            if k != 0:
                yield E1, k, seq_term(t, p.right), ch
            else:
                for E2, k2, t2, ch2 in surface(p.right, E, mode):
                    yield E1.union(E2), k2, seq_term(p.left, t2), ch + ch2
    elif isinstance(p, Par):
        rights = list(surface(p.right, E, mode))
        for E1, k1, t1, ch1 in surface(p.left, E, mode):
            for E2, k2, t2, ch2 in rights:
                k = max(k1, k2)
                yield E1.union(E2), k, delta_term(k, par_term(t1, t2)), ch1 + ch2
    elif isinstance(p, Loop):
        for E1, k, t, ch in surface(p.body, E, mode):
            if k == 0:
                if mode == CONSTRUCTIVE:
                    raise InstantaneousLoop()
                continue
            yield E1, k, loop_term(t), ch
    elif isinstance(p, Trap):
        for E1, k, t, ch in surface(p.body, E, mode):
            yield E1, down_code(k), trap_term(t), ch
    elif isinstance(p, Shift):
        for E1, k, t, ch in surface(p.body, E, mode):
            yield E1, up_code(k), shift_term(t), ch
    elif isinstance(p, SignalDecl):
        yield from _signal(p.s, p.body, lambda E2: surface(p.body, E2, mode), E, mode)
    else:
        raise TypeError(f"not a statement: {p!r}")


def _signal(s: str, source: Statement, run, E: Event, mode: str) -> Iterator[Result]:
    for st in signal_statuses(s, source, E, mode):
        for E1, k, t, ch in run(E.add(s, st)):
            if E1[s] is not st:
                assert mode == LOGICAL, f"incoherent constructive choice for {s}"
                continue
            yield E1.restrict(s), k, signal_term(s, t), ((s, st),) + ch


def depth(σ: State, E: Event, mode: str) -> Iterator[Result]:
    if isinstance(σ, ActivePause):
        yield E.empty(), 0, Const(1), ()
    elif isinstance(σ, ActiveAwait):
        st = read_status(E, σ.s)
        if not σ.positive:
            st = st.neg()
        if st is PLUS:
            yield E.empty(), 0, base(σ), ()
        else:
            yield E.empty(), 1, σ, ()
    elif isinstance(σ, SuspendState):
        if read_status(E, σ.s) is PLUS:
            yield E.empty(), 1, σ, ()
        else:
            for E1, k, t, ch in depth(σ.body, E, mode):
                yield E1, k, suspend_term(σ.s, t), ch
    elif isinstance(σ, IfLeft):
        for E1, k, t, ch in depth(σ.then, E, mode):
            yield E1, k, if_term(σ.s, t, σ.else_), ch
    elif isinstance(σ, IfRight):
        for E1, k, t, ch in depth(σ.else_, E, mode):
            yield E1, k, if_term(σ.s, σ.then, t), ch
    elif isinstance(σ, SeqLeft):
        for E1, k, t, ch in depth(σ.left, E, mode):
            if k != 0:
                yield E1, k, seq_term(t, σ.right), ch
            else:
                for E2, k2, t2, ch2 in surface(σ.right, E, mode):
                    yield E1.union(E2), k2, seq_term(t, t2), ch + ch2
    elif isinstance(σ, SeqRight):
        for E1, k, t, ch in depth(σ.right, E, mode):
            yield E1, k, seq_term(σ.left, t), ch
    elif isinstance(σ, ParBoth):
        rights = list(depth(σ.right, E, mode))
        for E1, k1, t1, ch1 in depth(σ.left, E, mode):
            for E2, k2, t2, ch2 in rights:
                k = max(k1, k2)
                yield E1.union(E2), k, delta_term(k, par_term(t1, t2)), ch1 + ch2
    elif isinstance(σ, ParLeft):
        for E1, k, t, ch in depth(σ.left, E, mode):
            yield E1, k, par_term(t, σ.right), ch
    elif isinstance(σ, ParRight):
        for E1, k, t, ch in depth(σ.right, E, mode):
            yield E1, k, par_term(σ.left, t), ch
    elif isinstance(σ, LoopState):
        body = base(σ.body)
        for E1, k, t, ch in depth(σ.body, E, mode):
            if k != 0:
                yield E1, k, loop_term(t), ch
                continue
            for E2, k2, t2, ch2 in surface(body, E, mode):
                if k2 == 0:
                    if mode == CONSTRUCTIVE:
                        raise InstantaneousLoop()
                    continue
                yield E1.union(E2), k2, loop_term(t2), ch + ch2
    elif isinstance(σ, TrapState):
        for E1, k, t, ch in depth(σ.body, E, mode):
            yield E1, down_code(k), trap_term(t), ch
    elif isinstance(σ, ShiftState):
        for E1, k, t, ch in depth(σ.body, E, mode):
            yield E1, up_code(k), shift_term(t), ch
    elif isinstance(σ, SignalState):
        yield from _signal(σ.s, expand(σ.body), lambda E2: depth(σ.body, E2, mode), E, mode)
    else:
        raise TypeError(f"not a state: {σ!r}")


def _unique(results: Iterator[Result]) -> Transition:
    E1, k, t, ch = next(results)
    assert next(results, None) is None, "the constructive semantics branched"
    return Transition(E1, k, t, ch)


def css_surface(p: Statement, E: Event) -> Transition:
    return _unique(surface(p, E, CONSTRUCTIVE))


def css_depth(σ: State, E: Event) -> Transition:
    return _unique(depth(σ, E, CONSTRUCTIVE))


def css_step(t: Term, E: Event) -> Transition:
    return css_depth(t, E) if is_state(t) else css_surface(t, E)


def lss_surface(p: Statement, E: Event) -> frozenset[Transition]:
    return frozenset(Transition(*r) for r in surface(p, E, LOGICAL))


def lss_depth(σ: State, E: Event) -> frozenset[Transition]:
    return frozenset(Transition(*r) for r in depth(σ, E, LOGICAL))


def check_state_transition(start: Term, E: Event, t: Transition) -> list[str]:
    """Base invariance, the inert-derivative equivalence and domain invariance."""
    problems = []
    b = base(start)
    if base(t.derivative) != b:
        problems.append("base statement changed")
    if (t.code != 1) != (t.derivative == b):
        problems.append(f"code {t.code} but the result term is {'inert' if t.derivative == b else 'live'}")
    if t.code == 1 and not is_state(t.derivative):
        problems.append("paused without an active state")
    if t.output.domain != E.domain:
        problems.append("domain changed")
    if not t.output.is_total():
        problems.append(f"output {t.output} is not total")
    return problems


# -- printing and parsing -------------------------------------------------


def _marked_leaf(t):
    if isinstance(t, ActivePause):
        return "^1"
    if isinstance(t, ActiveAwait):
        return f"^awimm {'' if t.positive else '¬'}{t.s}"
    return None


def _as_statement_view(t):
    """Map a state to a statement tree whose active leaves are tagged."""
    if not is_state(t):
        return t
    if isinstance(t, (ActivePause, ActiveAwait)):
        return _Mark(t)
    if isinstance(t, SuspendState):
        return Suspend(t.s, _as_statement_view(t.body))
    if isinstance(t, (IfLeft, IfRight)):
        return If(t.s, _as_statement_view(t.then), _as_statement_view(t.else_))
    if isinstance(t, (SeqLeft, SeqRight)):
        return Seq(_as_statement_view(t.left), _as_statement_view(t.right))
    if isinstance(t, (ParLeft, ParRight, ParBoth)):
        return Par(_as_statement_view(t.left), _as_statement_view(t.right))
    if isinstance(t, LoopState):
        return Loop(_as_statement_view(t.body))
    if isinstance(t, TrapState):
        return Trap(_as_statement_view(t.body))
    if isinstance(t, ShiftState):
        return Shift(_as_statement_view(t.body))
    if isinstance(t, SignalState):
        return SignalDecl(t.s, _as_statement_view(t.body))
    raise TypeError(t)


@dataclass(frozen=True)
class _Mark:
    leaf: State


def print_term(t: Term) -> str:
    from esk.syntax import _PAR, _sym

    return _sym(_as_statement_view(t), _PAR,
                lambda n: _marked_leaf(n.leaf) if isinstance(n, _Mark) else None)


def parse_term(text: str) -> Term:
    """Parse symbolic syntax where ``^`` marks active leaves."""
    from esk.syntax import _Parser, tokenize

    def mark(leaf):
        if isinstance(leaf, Const):
            return ActivePause()
        return ActiveAwait(leaf.s, leaf.positive)

    parser = _Parser(tokenize(text), marks=True, mark=mark, lift=build_checked)
    t = parser.sym_par()
    parser.finish()
    return t


def build_checked(ctor, *args) -> Term:
    if ctor in (Seq, If) and sum(is_state(a) for a in args) > 1:
        raise ParseError("a sequence or test has at most one active side")
    if any(is_state(a) for a in args):
        return build(ctor, *args)
    return ctor(*args)
