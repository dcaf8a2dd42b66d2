"""Must and Can potentials.

``must(p, E)`` under-approximates and ``can(b, p, E)`` over-approximates the
signals ``p`` emits and the completion codes it returns in the current
instant, using only the statuses already known in ``E`` (``BOT`` means
unknown). The flag ``b`` of Can is ``PLUS`` when ``p`` is known to be
executed and ``MINUS`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from esk.errors import UnboundSignal
from esk.events import BOT, MINUS, PLUS, Event, Status
from esk.kernel import (
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


@dataclass(frozen=True, slots=True)
class Potential:
    signals: frozenset[str]
    codes: frozenset[int]

    def __le__(self, other: Potential) -> bool:
        return self.signals <= other.signals and self.codes <= other.codes

    def __str__(self):
        sigs = ",".join(sorted(self.signals))
        codes = ",".join(str(k) for k in sorted(self.codes))
        return f"{{{sigs}}} / {{{codes}}}"


def _pot(signals: Iterable[str] = (), codes: Iterable[int] = ()) -> Potential:
    return Potential(frozenset(signals), frozenset(codes))


NONE = _pot()


def max_codes(K: frozenset[int], L: frozenset[int]) -> frozenset[int]:
    return frozenset(max(k, l) for k in K for l in L)


def _status(E: Event, s: str) -> Status:
    return E[s]


def _await_status(E: Event, p: AwaitImmediate) -> Status:
    st = _status(E, p.s)
    return st if p.positive else st.neg()


def seq_continuation_flag(b: Status, must_codes_left: frozenset[int]) -> Status:
    """Flag for Can of the right side of a sequence whose left side may terminate."""
    return PLUS if b is PLUS and 0 in must_codes_left else MINUS


def must(p: Statement, E: Event) -> Potential:
    if isinstance(p, Const):
        return _pot((), (p.k,))
    if isinstance(p, Emit):
        if p.s not in E:
            raise UnboundSignal(p.s)
        return _pot((p.s,), (0,))
    if isinstance(p, AwaitImmediate):
        st = _await_status(E, p)
        if st is PLUS:
            return _pot((), (0,))
        if st is MINUS:
            return _pot((), (1,))
        return NONE
    if isinstance(p, If):
        st = _status(E, p.s)
        if st is PLUS:
            return must(p.then, E)
        if st is MINUS:
            return must(p.else_, E)
        return NONE
    if isinstance(p, (Suspend, Loop)):
        return must(p.body, E)
    if isinstance(p, Par):
        mp, mq = must(p.left, E), must(p.right, E)
        return Potential(mp.signals | mq.signals, max_codes(mp.codes, mq.codes))
    if isinstance(p, Trap):
        m = must(p.body, E)
        return Potential(m.signals, frozenset(down_code(k) for k in m.codes))
    if isinstance(p, Shift):
        m = must(p.body, E)
        return Potential(m.signals, frozenset(up_code(k) for k in m.codes))
    if isinstance(p, Seq):
        mp = must(p.left, E)
        if 0 not in mp.codes:
            return mp
        mq = must(p.right, E)
        return Potential(mp.signals | mq.signals, mq.codes)
    if isinstance(p, SignalDecl):
        st = local_status(p, E, PLUS, for_can=False)
        m = must(p.body, E.add(p.s, st))
        return Potential(m.signals - {p.s}, m.codes)
    raise TypeError(f"not a statement: {p!r}")


def can(b: Status, p: Statement, E: Event) -> Potential:
    if b is BOT:
        raise ValueError("the Can flag is PLUS or MINUS")
    if isinstance(p, Const):
        return _pot((), (p.k,))
    if isinstance(p, Emit):
        if p.s not in E:
            raise UnboundSignal(p.s)
        return _pot((p.s,), (0,))
    if isinstance(p, AwaitImmediate):
        st = _await_status(E, p)
        if st is PLUS:
            return _pot((), (0,))
        if st is MINUS:
            return _pot((), (1,))
        return _pot((), (0, 1))
    if isinstance(p, If):
        st = _status(E, p.s)
        if st is PLUS:
            return can(b, p.then, E)
        if st is MINUS:
            return can(b, p.else_, E)
        cp, cq = can(MINUS, p.then, E), can(MINUS, p.else_, E)
        return Potential(cp.signals | cq.signals, cp.codes | cq.codes)
    if isinstance(p, (Suspend, Loop)):
        return can(b, p.body, E)
    if isinstance(p, Par):
        cp, cq = can(b, p.left, E), can(b, p.right, E)
        return Potential(cp.signals | cq.signals, max_codes(cp.codes, cq.codes))
    if isinstance(p, Trap):
        c = can(b, p.body, E)
        return Potential(c.signals, frozenset(down_code(k) for k in c.codes))
    if isinstance(p, Shift):
        c = can(b, p.body, E)
        return Potential(c.signals, frozenset(up_code(k) for k in c.codes))
    if isinstance(p, Seq):
        cp = can(b, p.left, E)
        if 0 not in cp.codes:
            return cp
        flag = seq_continuation_flag(b, must(p.left, E).codes)
        cq = can(flag, p.right, E)
        return Potential(cp.signals | cq.signals, (cp.codes - {0}) | cq.codes)
    if isinstance(p, SignalDecl):
        st = local_status(p, E, b, for_can=True)
        c = can(b, p.body, E.add(p.s, st))
        return Potential(c.signals - {p.s}, c.codes)
    raise TypeError(f"not a statement: {p!r}")


def local_status(p: SignalDecl, E: Event, b: Status, *, for_can: bool) -> Status:
    """Status given to a declared signal when computing potentials of its body."""
    inner = E.add(p.s, BOT)
    if (not for_can or b is PLUS) and p.s in must(p.body, inner).signals:
        return PLUS
    if p.s not in can(PLUS, p.body, inner).signals:
        return MINUS
    return BOT


def explain(p: Statement, E: Event, indent: int = 0) -> list[str]:
    """One line per node: the node kind with its Must and Can+ potentials."""
    from esk.syntax import print_statement

    head = print_statement(p)
    if len(head) > 40:
        head = head[:37] + "..."
    line = f"{'  ' * indent}{head:<{max(1, 44 - 2 * indent)}} Must = {must(p, E)}  Can+ = {can(PLUS, p, E)}"
    lines = [line]
    if isinstance(p, SignalDecl):
        st = local_status(p, E, PLUS, for_can=False)
        lines += explain(p.body, E.add(p.s, st), indent + 1)
    elif isinstance(p, If):
        lines += explain(p.then, E, indent + 1)
        lines += explain(p.else_, E, indent + 1)
    elif isinstance(p, (Seq, Par)):
        lines += explain(p.left, E, indent + 1)
        lines += explain(p.right, E, indent + 1)
    elif isinstance(p, (Suspend, Loop, Trap, Shift)):
        lines += explain(p.body, E, indent + 1)
    return lines


def must_state(state, E: Event) -> Potential:
    from esk.states import expand

    return must(expand(state), E)


def can_state(b: Status, state, E: Event) -> Potential:
    from esk.states import expand

    return can(b, expand(state), E)
