"""Token-based microstep semantics.

A microstate is a loop-free statement where every node carries an input color
(Sel, Go, Res, Susp) and an output color: ``Black(k)`` when code wire ``k`` is
known to be raised, ``White(K)`` when every wire outside ``K`` is known to be
low. Steps only ever add information, so every run terminates, and the rewrite
system is confluent. Wires use :class:`esk.events.Status` as Scott booleans.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Iterator, Sequence

from esk.errors import EskError
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
from esk.states import (
    ActiveAwait,
    ActivePause,
    IfLeft,
    IfRight,
    LoopState,
    ParBoth,
    ParLeft,
    ParRight,
    SeqLeft,
    SeqRight,
    ShiftState,
    SignalState,
    SuspendState,
    Term,
    TrapState,
    build,
    is_state,
)


class MicroError(EskError):
    pass


class NotTotal(MicroError):
    """A microstate still misses information where a total one is required."""


class BudgetExceeded(MicroError):
    pass


# -- output colors ----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Black:
    k: int

    def __str__(self):
        return f"B{self.k}"


@dataclass(frozen=True, slots=True)
class White:
    codes: frozenset

    def __str__(self):
        return "W{" + ",".join(str(k) for k in sorted(self.codes)) + "}"


WHITE_ALL = White(frozenset())


def white(*codes: int) -> White:
    return White(frozenset(codes))


def out_leq(a, b) -> bool:
    if isinstance(a, White):
        if isinstance(b, White):
            return b.codes <= a.codes
        return b.k in a.codes
    return isinstance(b, Black) and a.k == b.k


def out_lt(a, b) -> bool:
    return a != b and out_leq(a, b)


def out_map(f: Callable[[int], int], c):
    if isinstance(c, Black):
        return Black(f(c.k))
    return White(frozenset(f(k) for k in c.codes))


def remove_zero(c):
    """``c ∖ 0``: a terminated branch contributes no code."""
    if isinstance(c, Black):
        return WHITE_ALL if c.k == 0 else c
    return White(c.codes - {0})


def out_union(a, b):
    """Join of the code wires of two branches at most one of which runs."""
    if isinstance(a, White) and isinstance(b, White):
        return White(a.codes | b.codes)
    if isinstance(a, White):
        a, b = b, a
    if isinstance(b, White):
        return a if b.codes <= {a.k} else White(b.codes | {a.k})
    return a if a.k == b.k else white(a.k, b.k)


def _codes(c) -> frozenset:
    return frozenset({c.k}) if isinstance(c, Black) else c.codes


def _may_live(c, dead: Status) -> bool:
    return c != WHITE_ALL and dead is not PLUS


def _may_die(c, dead: Status) -> bool:
    return not isinstance(c, Black) and dead is not MINUS


def synchronize(sel_p: bool, sel_q: bool, out_p, out_q, dead_p: Status = BOT, dead_q: Status = BOT):
    """Most precise code of a parallel given what is known of its branches.

    A branch that runs contributes one of its candidate codes, a dead one
    contributes nothing. Both branches run on Go, only the selected ones on a
    bare resume, none otherwise: so liveness is correlated through Sel.
    ``dead_p``/``dead_q`` add what the in-colors already say.
    """
    outcomes, may_die = set(), False
    for live_p, live_q in {(True, True), (sel_p, sel_q), (False, False)}:
        if live_p and not _may_live(out_p, dead_p) or not live_p and not _may_die(out_p, dead_p):
            continue
        if live_q and not _may_live(out_q, dead_q) or not live_q and not _may_die(out_q, dead_q):
            continue
        if live_p and live_q:
            outcomes |= {max(k, l) for k in _codes(out_p) for l in _codes(out_q)}
        elif live_p:
            outcomes |= _codes(out_p)
        elif live_q:
            outcomes |= _codes(out_q)
        else:
            may_die = True
    if len(outcomes) == 1 and not may_die:
        return Black(next(iter(outcomes)))
    return White(frozenset(outcomes))


def dead(m) -> Status:
    """Whether ``m`` is known not to run in this instant (``nogores``)."""
    if nogores(m):
        return PLUS
    if gores(m):
        return MINUS
    return BOT


def susp_now(bo: Status, out):
    if bo is MINUS:
        return out
    if bo is PLUS:
        if out == WHITE_ALL:
            return Black(1)
        if isinstance(out, Black):
            return Black(max(1, out.k))
        return White(frozenset({1}) | (out.codes - {0}))
    if out == Black(0):
        return white(0, 1)
    if out == Black(1):
        return out
    if isinstance(out, Black):
        return white(1, out.k)
    return White(out.codes | {1})


# -- microstates ------------------------------------------------------------

LEAVES = ("nothing", "pause", "exit", "emit", "awimm")


@dataclass(frozen=True, slots=True)
class Micro:
    kind: str
    sel: bool
    go: Status
    res: Status
    susp: Status
    out: object
    kids: tuple = ()
    sig: str | None = None
    # exit: wire index n (code n + 2); awimm: polarity
    arg: object = None

    def in_color(self) -> tuple[Status, Status, Status]:
        return (self.go, self.res, self.susp)

    def with_in(self, go: Status, res: Status, susp: Status) -> Micro:
        return replace(self, go=go, res=res, susp=susp)


def in_str(m: Micro) -> str:
    return f"[S{'+' if m.sel else '-'} G{m.go} R{m.res} U{m.susp}]"


def _in_lt(child: tuple, target: tuple) -> bool:
    return child != target and all(a.leq(b) for a, b in zip(child, target))


def gores(m: Micro) -> bool:
    return m.go is PLUS or (m.sel and m.res is PLUS)


def nogores(m: Micro) -> bool:
    return m.go is MINUS and (not m.sel or m.res is MINUS)


def is_total(m: Micro) -> bool:
    if BOT in m.in_color():
        return False
    if isinstance(m.out, White) and m.out.codes:
        return False
    return all(is_total(k) for k in m.kids)


def nodes(m: Micro, path: tuple = ()) -> Iterator[tuple[tuple, Micro]]:
    yield path, m
    for i, k in enumerate(m.kids):
        yield from nodes(k, path + (i,))


def measure(m: Micro) -> int:
    """Missing information: unknown wires plus candidate codes of white outputs."""
    total = 0
    for _, n in nodes(m):
        total += sum(1 for w in n.in_color() if w is BOT)
        if isinstance(n.out, White):
            total += len(n.out.codes)
    return total


def statement_of(m: Micro) -> Statement:
    """The underlying statement (base)."""
    if m.kind == "nothing":
        return Const(0)
    if m.kind == "pause":
        return Const(1)
    if m.kind == "exit":
        return Const(m.arg + 2)
    if m.kind == "emit":
        return Emit(m.sig)
    if m.kind == "awimm":
        return AwaitImmediate(m.sig, m.arg)
    kids = [statement_of(k) for k in m.kids]
    if m.kind == "trap":
        return Trap(*kids)
    if m.kind == "shift":
        return Shift(*kids)
    if m.kind == "suspend":
        return Suspend(m.sig, *kids)
    if m.kind == "if":
        return If(m.sig, *kids)
    if m.kind == "seq":
        return Seq(*kids)
    if m.kind == "par":
        return Par(*kids)
    if m.kind == "signal":
        return SignalDecl(m.sig, *kids)
    raise MicroError(f"unknown kind {m.kind}")


# -- conversions ------------------------------------------------------------


def static_out(kind: str, kids: Sequence[Micro], arg=None):
    """Initial output color: the end combinators applied to the children's."""
    if kind in ("nothing", "emit"):
        return white(0)
    if kind == "exit":
        return white(arg + 2)
    if kind in ("pause", "awimm"):
        return white(0, 1)
    outs = [k.out for k in kids]
    if kind == "trap":
        return out_map(down_code, outs[0])
    if kind == "shift":
        return out_map(up_code, outs[0])
    if kind == "suspend":
        return susp_now(BOT, outs[0])
    if kind == "if":
        return out_union(*outs)
    if kind == "seq":
        return out_union(remove_zero(outs[0]), outs[1])
    if kind == "par":
        return synchronize(kids[0].sel, kids[1].sel, *outs, dead(kids[0]), dead(kids[1]))
    if kind == "signal":
        return outs[0]
    raise MicroError(f"unknown kind {kind}")


def _node(kind: str, sel: bool, kids=(), sig=None, arg=None) -> Micro:
    kids = tuple(kids)
    return Micro(kind, sel, BOT, BOT, BOT, static_out(kind, kids, arg), kids, sig, arg)


def from_cmd(p: Statement) -> Micro:
    if isinstance(p, Const):
        if p.k == 0:
            return _node("nothing", False)
        if p.k == 1:
            return _node("pause", False)
        return _node("exit", False, arg=p.k - 2)
    if isinstance(p, Emit):
        return _node("emit", False, sig=p.s)
    if isinstance(p, AwaitImmediate):
        return _node("awimm", False, sig=p.s, arg=p.positive)
    if isinstance(p, Loop):
        raise MicroError("loops have no microstep semantics")
    if isinstance(p, Trap):
        return _node("trap", False, [from_cmd(p.body)])
    if isinstance(p, Shift):
        return _node("shift", False, [from_cmd(p.body)])
    if isinstance(p, Suspend):
        return _node("suspend", False, [from_cmd(p.body)], sig=p.s)
    if isinstance(p, If):
        return _node("if", False, [from_cmd(p.then), from_cmd(p.else_)], sig=p.s)
    if isinstance(p, Seq):
        return _node("seq", False, [from_cmd(p.left), from_cmd(p.right)])
    if isinstance(p, Par):
        return _node("par", False, [from_cmd(p.left), from_cmd(p.right)])
    if isinstance(p, SignalDecl):
        return _node("signal", False, [from_cmd(p.body)], sig=p.s)
    raise TypeError(f"not a statement: {p!r}")


def from_state(σ) -> Micro:
    if isinstance(σ, ActivePause):
        return _node("pause", True)
    if isinstance(σ, ActiveAwait):
        return _node("awimm", True, sig=σ.s, arg=σ.positive)
    if isinstance(σ, LoopState):
        raise MicroError("loops have no microstep semantics")

    def t(x):
        return from_state(x) if is_state(x) else from_cmd(x)

    if isinstance(σ, TrapState):
        return _node("trap", True, [t(σ.body)])
    if isinstance(σ, ShiftState):
        return _node("shift", True, [t(σ.body)])
    if isinstance(σ, SuspendState):
        return _node("suspend", True, [t(σ.body)], sig=σ.s)
    if isinstance(σ, (IfLeft, IfRight)):
        return _node("if", True, [t(σ.then), t(σ.else_)], sig=σ.s)
    if isinstance(σ, (SeqLeft, SeqRight)):
        return _node("seq", True, [t(σ.left), t(σ.right)])
    if isinstance(σ, (ParLeft, ParRight, ParBoth)):
        return _node("par", True, [t(σ.left), t(σ.right)])
    if isinstance(σ, SignalState):
        return _node("signal", True, [t(σ.body)], sig=σ.s)
    raise TypeError(f"not a state: {σ!r}")


def from_term(t: Term) -> Micro:
    return from_state(t) if is_state(t) else from_cmd(t)


START = "start"
RESUME = "resume"


def set_gr(m: Micro, mode: str) -> Micro:
    if mode == START:
        return m.with_in(PLUS, MINUS, MINUS)
    if mode == RESUME:
        if not m.sel:
            raise MicroError("cannot resume an inactive microstate")
        return m.with_in(MINUS, PLUS, MINUS)
    raise ValueError(f"unknown mode {mode!r}")


# -- signals ----------------------------------------------------------------


def _emitters(m: Micro, s: str) -> Iterator[Micro]:
    if m.kind == "emit" and m.sig == s:
        yield m
    if m.kind == "signal" and m.sig == s:
        return
    for k in m.kids:
        yield from _emitters(k, s)


def signal_status(m: Micro, s: str) -> Status:
    """Status of ``s`` read off the emitters of ``s`` visible at the root of ``m``."""
    status = MINUS
    for e in _emitters(m, s):
        if e.out == Black(0):
            return PLUS
        if e.out != WHITE_ALL:
            status = BOT
    return status


def to_event(m: Micro, E: Event) -> Event:
    """Readout of every signal in the domain of ``E``."""
    return Event(tuple((s, signal_status(m, s)) for s, _ in E.bindings))


# -- steps ------------------------------------------------------------------

Step = tuple[str, tuple, str, str, Micro]


def _set_out(rule: str, m: Micro, out, path: tuple) -> Iterator[Step]:
    if out_lt(m.out, out):
        yield rule, path, str(m.out), str(out), replace(m, out=out)


def _set_kid_in(rule: str, m: Micro, i: int, color: tuple, path: tuple) -> Iterator[Step]:
    kid = m.kids[i]
    if _in_lt(kid.in_color(), color):
        new_kid = kid.with_in(*color)
        kids = m.kids[:i] + (new_kid,) + m.kids[i + 1:]
        yield rule, path + (i,), in_str(kid), in_str(new_kid), replace(m, kids=kids)


def _set_kid_wire(rule: str, m: Micro, i: int, wire: str, value: Status, path: tuple) -> Iterator[Step]:
    kid = m.kids[i]
    if getattr(kid, wire).lt(value):
        new_kid = replace(kid, **{wire: value})
        kids = m.kids[:i] + (new_kid,) + m.kids[i + 1:]
        yield rule, path + (i,), in_str(kid), in_str(new_kid), replace(m, kids=kids)


def _context(m: Micro, i: int, E: Event, path: tuple) -> Iterator[Step]:
    for rule, p, before, after, new_kid in micro_steps(E, m.kids[i], path + (i,)):
        kids = m.kids[:i] + (new_kid,) + m.kids[i + 1:]
        yield rule, p, before, after, replace(m, kids=kids)


def _leaf_steps(E: Event, m: Micro, path: tuple) -> Iterator[Step]:
    out = m.out
    if m.kind in ("nothing", "exit", "emit"):
        code = m.arg + 2 if m.kind == "exit" else 0
        if m.go is MINUS and isinstance(out, White) and out.codes:
            yield from _set_out(f"{m.kind}-dead", m, WHITE_ALL, path)
        if m.go is PLUS:
            yield from _set_out(f"{m.kind}-go", m, Black(code), path)
    elif m.kind == "pause":
        if (m.res is MINUS or not m.sel) and isinstance(out, White) and 0 in out.codes:
            yield from _set_out("pause-no0", m, White(out.codes - {0}), path)
        if m.go is MINUS and isinstance(out, White) and 1 in out.codes:
            yield from _set_out("pause-no1", m, White(out.codes - {1}), path)
        if m.go is PLUS:
            yield from _set_out("pause-go", m, Black(1), path)
        if m.sel and m.res is PLUS and m.susp is MINUS:
            yield from _set_out("pause-res", m, Black(0), path)
    elif m.kind == "awimm":
        st = E.get(m.sig, BOT)
        if not m.arg:
            st = st.neg()
        dead = nogores(m)
        if (dead or st is MINUS) and isinstance(out, White) and 0 in out.codes:
            yield from _set_out("awimm-no0", m, White(out.codes - {0}), path)
        if (dead or st is PLUS) and isinstance(out, White) and 1 in out.codes:
            yield from _set_out("awimm-no1", m, White(out.codes - {1}), path)
        if gores(m) and st is MINUS:
            yield from _set_out("awimm-wait", m, Black(1), path)
        if gores(m) and st is PLUS:
            yield from _set_out("awimm-go", m, Black(0), path)


def micro_steps(E: Event, m: Micro, path: tuple = ()) -> Iterator[Step]:
    """Every single-rule successor of ``m`` as ``(rule, path, before, after, m')``.

    ``path`` locates the node whose color changes; ``before``/``after`` are
    that color (input color for start rules, output color otherwise).
    """
    if m.kind in LEAVES:
        yield from _leaf_steps(E, m, path)
        return
    color = m.in_color()
    kind = m.kind
    if kind in ("trap", "shift"):
        yield from _set_kid_in(f"{kind}-in", m, 0, color, path)
        yield from _context(m, 0, E, path)
        f = down_code if kind == "trap" else up_code
        yield from _set_out(f"{kind}-end", m, out_map(f, m.kids[0].out), path)
    elif kind == "suspend":
        p = m.kids[0]
        st = E.get(m.sig, BOT)
        sel_p = Status.of_bool(p.sel)
        yield from _set_kid_wire("suspend-go", m, 0, "go", m.go, path)
        yield from _set_kid_wire("suspend-res", m, 0, "res", m.res.and_(sel_p).and_(st.neg()), path)
        susp = m.susp.or_(m.res.and_(sel_p).and_(st))
        yield from _set_kid_wire("suspend-susp", m, 0, "susp", susp, path)
        yield from _context(m, 0, E, path)
        yield from _set_out("suspend-end-bot", m, susp_now(BOT, p.out), path)
        yield from _set_out("suspend-end", m, susp_now(susp, p.out), path)
    elif kind == "if":
        st = E.get(m.sig, BOT)
        yield from _set_kid_wire("if-go-then", m, 0, "go", m.go.and_(st), path)
        yield from _set_kid_wire("if-go-else", m, 1, "go", m.go.and_(st.neg()), path)
        for i, side in ((0, "then"), (1, "else")):
            yield from _set_kid_wire(f"if-res-{side}", m, i, "res", m.res, path)
            yield from _set_kid_wire(f"if-susp-{side}", m, i, "susp", m.susp, path)
        yield from _context(m, 0, E, path)
        yield from _context(m, 1, E, path)
        yield from _set_out("if-end", m, out_union(m.kids[0].out, m.kids[1].out), path)
    elif kind == "seq":
        p, q = m.kids
        yield from _set_kid_in("seq-in-left", m, 0, color, path)
        yield from _set_kid_wire("seq-res-right", m, 1, "res", m.res, path)
        yield from _set_kid_wire("seq-susp-right", m, 1, "susp", m.susp, path)
        if q.go is BOT:
            if p.out == Black(0):
                yield from _set_kid_wire("seq-go-right", m, 1, "go", PLUS, path)
            elif not out_leq(p.out, Black(0)):
                yield from _set_kid_wire("seq-nogo-right", m, 1, "go", MINUS, path)
        yield from _context(m, 0, E, path)
        yield from _context(m, 1, E, path)
        yield from _set_out("seq-end", m, out_union(remove_zero(p.out), q.out), path)
    elif kind == "par":
        p, q = m.kids
        yield from _set_kid_in("par-in-left", m, 0, color, path)
        yield from _set_kid_in("par-in-right", m, 1, color, path)
        yield from _context(m, 0, E, path)
        yield from _context(m, 1, E, path)
        synch = synchronize(p.sel, q.sel, p.out, q.out, dead(p), dead(q))
        yield from _set_out("par-end", m, synch, path)
    elif kind == "signal":
        p = m.kids[0]
        yield from _set_kid_in("signal-in", m, 0, color, path)
        yield from _context(m, 0, E.add(m.sig, signal_status(p, m.sig)), path)
        yield from _set_out("signal-end", m, p.out, path)
    else:
        raise MicroError(f"unknown kind {kind}")


def feedback_event(E: Event, m: Micro, feedback: Iterable[str]) -> Event:
    """``E`` extended with the readout of the program-level ``feedback`` signals."""
    for s in feedback:
        E = E.add(s, signal_status(m, s))
    return E


def micro_step(E: Event, m: Micro, feedback: Iterable[str] = ()) -> list[Step]:
    return list(micro_steps(feedback_event(E, m, feedback), m))


# -- runs -------------------------------------------------------------------

SCHEDULES = ("first", "last", "random")


def micro_run(E: Event, m: Micro, schedule: str = "first", *, seed: int | None = None,
              feedback: Iterable[str] = (), budget: int | None = None,
              on_step: Callable[[int, Step, Micro], None] | None = None) -> Micro:
    """Rewrite ``m`` to its normal form under ``E``.

    ``feedback`` names signals declared around the whole microstate (program
    outputs): their status is read back from ``m`` before every step.
    ``on_step(n, step, before)`` sees every step taken.
    """
    feedback = tuple(feedback)
    rng = random.Random(seed)
    limit = measure(m) if budget is None else budget
    n = 0
    while True:
        E_now = feedback_event(E, m, feedback)
        if schedule == "first":
            step = next(micro_steps(E_now, m), None)
        else:
            steps = list(micro_steps(E_now, m))
            if not steps:
                step = None
            elif schedule == "last":
                step = steps[-1]
            elif schedule == "random":
                step = rng.choice(steps)
            else:
                raise ValueError(f"unknown schedule {schedule!r}")
        if step is None:
            return m
        n += 1
        if n > limit:
            raise BudgetExceeded(f"more than {limit} steps")
        if on_step is not None:
            on_step(n, step, m)
        m = step[4]


def normal_forms(E: Event, m: Micro, feedback: Iterable[str] = (), limit: int = 20000) -> set[Micro]:
    """Every reachable normal form, by exhaustive search (small terms only)."""
    feedback = tuple(feedback)
    seen = {m}
    todo = [m]
    finals = set()
    while todo:
        cur = todo.pop()
        succ = micro_step(E, cur, feedback)
        if not succ:
            finals.add(cur)
        for step in succ:
            if step[4] not in seen:
                seen.add(step[4])
                todo.append(step[4])
                if len(seen) > limit:
                    raise BudgetExceeded(f"more than {limit} reachable microstates")
    return finals


def format_step(n: int, step: Step) -> str:
    rule, path, before, after, _ = step
    where = ".".join(str(i) for i in path) or "."
    return f"#{n} rule={rule} path={where} before={before} after={after}"


# -- order and invariants ---------------------------------------------------


def mleq(m1: Micro, m2: Micro) -> bool:
    if (m1.kind, m1.sig, m1.arg, m1.sel, len(m1.kids)) != (m2.kind, m2.sig, m2.arg, m2.sel, len(m2.kids)):
        return False
    if not all(a.leq(b) for a, b in zip(m1.in_color(), m2.in_color())):
        return False
    if not out_leq(m1.out, m2.out):
        return False
    return all(mleq(a, b) for a, b in zip(m1.kids, m2.kids))


def mlt(m1: Micro, m2: Micro) -> bool:
    return m1 != m2 and mleq(m1, m2)


def sel_skeleton(m: Micro):
    return (m.kind, m.sig, m.arg, m.sel, tuple(sel_skeleton(k) for k in m.kids))


def back_to_term(m: Micro) -> Term:
    """The term whose activation marks are the Sel bits of ``m``."""
    if m.kind == "pause":
        return ActivePause() if m.sel else Const(1)
    if m.kind == "awimm":
        return ActiveAwait(m.sig, m.arg) if m.sel else AwaitImmediate(m.sig, m.arg)
    if m.kind in LEAVES:
        return statement_of(m)
    return _rebuild(m, [back_to_term(k) for k in m.kids])


def _rebuild(m: Micro, kids: list) -> Term:
    ctor = {"trap": Trap, "shift": Shift, "suspend": Suspend, "if": If,
            "seq": Seq, "par": Par, "signal": SignalDecl}[m.kind]
    args = ([m.sig] if m.sig is not None else []) + kids
    if any(is_state(k) for k in kids):
        return build(ctor, *args)
    return ctor(*args)


def _frozen(m: Micro) -> bool:
    return m.sel and m.susp is PLUS


def _active_leaf(m: Micro) -> bool:
    return m.out == Black(1) or _frozen(m)


def _to_term(m: Micro) -> Term:
    if m.kind == "pause":
        return ActivePause() if _active_leaf(m) else Const(1)
    if m.kind == "awimm":
        return ActiveAwait(m.sig, m.arg) if _active_leaf(m) else AwaitImmediate(m.sig, m.arg)
    if m.kind in LEAVES:
        return statement_of(m)
    if m.kind == "par" and isinstance(m.out, Black) and m.out.k >= 2:
        return statement_of(m)  # killed
    kids = [_to_term(k) for k in m.kids]
    if m.kind in ("if", "seq") and all(is_state(k) for k in kids):
        raise MicroError(f"both branches of a {m.kind} remain active")
    return _rebuild(m, kids)


def to_term(m: Micro, E: Event | None = None) -> tuple[Term, int | None, Event]:
    """Read a total microstate back as (term, code, output event over ``E``'s domain).

    The code is ``None`` when the root is dead (White of nothing).
    """
    if not is_total(m):
        raise NotTotal("microstate is not total")
    if E is None:
        from esk.kernel import free_signals

        E = Event.absent(sorted(free_signals(statement_of(m))))
    code = m.out.k if isinstance(m.out, Black) else None
    return _to_term(m), code, to_event(m, E)


def vc_check(E: Event, m: Micro) -> list[str]:
    """Violations of the listed consequences of the circuit invariant."""
    problems = []
    for path, n in nodes(m):
        where = ".".join(str(i) for i in path) or "."
        if n.sel and n.go is PLUS:
            problems.append(f"{where}: Sel and Go both set")
        if isinstance(n.out, Black) and not (gores(n) or n.susp is PLUS):
            problems.append(f"{where}: black output {n.out} without control {in_str(n)}")
        if n.out == WHITE_ALL and not nogores(n):
            problems.append(f"{where}: dead output with live control {in_str(n)}")
        if n.kind == "if" and gores(n.kids[0]) and gores(n.kids[1]):
            problems.append(f"{where}: both branches of a test are running")
        if n.kind == "seq":
            p, q = n.kids
            if isinstance(remove_zero(p.out), Black) and gores(q):
                problems.append(f"{where}: sequence runs its right side while the left one exits or pauses")
    if not mleq(from_term(back_to_term(m)), m):
        problems.append(".: initial microstate of the current term is not below it")
    return problems


# -- debugging --------------------------------------------------------------


def to_dot(m: Micro) -> str:
    lines = ["digraph micro {", "  node [shape=box, fontname=monospace];"]
    for path, n in nodes(m):
        name = "n" + "_".join(str(i) for i in path)
        label = n.kind + (f" {n.sig}" if n.sig else "") + (f" {n.arg}" if n.kind == "exit" else "")
        fill = "black" if isinstance(n.out, Black) else "white"
        font = "white" if fill == "black" else "black"
        lines.append(f'  {name} [label="{label}\\n{in_str(n)} {n.out}", style=filled, '
                     f'fillcolor={fill}, fontcolor={font}];')
        if path:
            lines.append(f"  n{'_'.join(str(i) for i in path[:-1])} -> {name};")
    lines.append("}")
    return "\n".join(lines)
