"""Random well-scoped programs, inputs, and a greedy shrinker."""

from __future__ import annotations

import random
from typing import Callable, Iterator

from esk.events import BOT, MINUS, PLUS, Event
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
    children,
)
from esk import potentials

FREE = ("a", "b", "c")
LOCAL = ("s", "t", "u", "a")
MAX_DECLS = 5


class Generator:
    def __init__(self, rng: random.Random, *, loops: bool = True, free=FREE,
                 exits: bool = True, awaits: bool = True, min_depth: int = 2):
        self.rng = rng
        # Nodes above this depth are never leaves, so programs are not trivial.
        self.min_depth = min_depth
        self.loops = loops
        self.free = tuple(free)
        self.exits = exits
        self.awaits = awaits

    def program(self, depth: int) -> Statement:
        self.top = depth
        return self._gen(depth, list(self.free), 0, 0)

    def _signal(self, visible: list[str]) -> str:
        # Favor the innermost declared signal, so local signals get both
        # emitted and tested often enough to matter.
        if len(visible) > len(self.free) and self.rng.random() < 0.5:
            return visible[-1]
        return self.rng.choice(visible)

    def _leaf(self, visible: list[str], traps: int) -> Statement:
        r = self.rng
        options = ["nothing", "pause", "pause"]
        if visible:
            options += ["emit", "emit"]
            if self.awaits:
                options.append("awimm")
        if self.exits and traps:
            options.append("exit")
        kind = r.choice(options)
        if kind == "nothing":
            return Const(0)
        if kind == "pause":
            return Const(1)
        if kind == "exit":
            return Const(r.randint(2, traps + 2))
        if kind == "emit":
            return Emit(self._signal(visible))
        return AwaitImmediate(self._signal(visible), r.random() < 0.7)

    def _gen(self, depth: int, visible: list[str], traps: int, decls: int) -> Statement:
        r = self.rng
        roll = r.random()
        if self.top - depth < self.min_depth and depth > 0:
            roll = 0.40 + 0.60 * roll
        if depth <= 0 or roll < 0.40:
            return self._leaf(visible, traps)
        if roll < 0.65:
            options = ["suspend", "trap", "shift", "signal"]
            if self.loops:
                options.append("loop")
            if not visible:
                options.remove("suspend")
            if decls >= MAX_DECLS:
                options.remove("signal")
            kind = r.choice(options)
            if kind == "suspend":
                return Suspend(self._signal(visible), self._gen(depth - 1, visible, traps, decls))
            if kind == "trap":
                return Trap(self._gen(depth - 1, visible, traps + 1, decls))
            if kind == "shift":
                return Shift(self._gen(depth - 1, visible, traps + 1, decls))
            if kind == "signal":
                s = r.choice(LOCAL)
                body = self._gen(depth - 1, visible + [s], traps, decls + 1)
                # Often emit the signal up front, so the body's tests of it
                # are decided by Must rather than left unknown.
                if r.random() < 0.5:
                    body = r.choice((Seq, Par))(Emit(s), body)
                return SignalDecl(s, body)
            return make_loop(self._gen(depth - 1, visible, traps, decls))
        kind = r.choice(["seq", "seq", "par", "if"] if visible else ["seq", "par"])
        left = self._gen(depth - 1, visible, traps, decls)
        right = self._gen(depth - 1, visible, traps, decls)
        if kind == "seq":
            return Seq(left, right)
        if kind == "par":
            return Par(left, right)
        return If(self._signal(visible), left, right)


def may_terminate(p: Statement) -> bool:
    """Whether ``p`` might terminate instantly, under any environment."""
    env = Event.of([(s, BOT) for s in sorted(_all_signals(p))])
    return 0 in potentials.can(MINUS, p, env).codes


def _all_signals(p: Statement) -> set[str]:
    out = set()
    stack = [p]
    while stack:
        q = stack.pop()
        s = getattr(q, "s", None)
        if s is not None:
            out.add(s)
        stack.extend(children(q))
    return out


def make_loop(body: Statement) -> Loop:
    """A loop whose body can never terminate instantly."""
    if may_terminate(body):
        body = Seq(body, Const(1))
    return Loop(body)


def random_program(seed: int, depth: int = 5, *, loops: bool = True, free=FREE) -> Statement:
    return Generator(random.Random(seed), loops=loops, free=free).program(depth)


def random_event(rng: random.Random, signals, statuses=(PLUS, MINUS)) -> Event:
    return Event(tuple((s, rng.choice(statuses)) for s in signals))


def random_inputs(rng: random.Random, signals, max_instants: int = 6) -> list[Event]:
    return [random_event(rng, signals) for _ in range(rng.randint(1, max_instants))]


# -- shrinking -------------------------------------------------------------


def _replace_child(p: Statement, i: int, new: Statement) -> Statement:
    if isinstance(p, If):
        return If(p.s, new, p.else_) if i == 0 else If(p.s, p.then, new)
    if isinstance(p, (Seq, Par)):
        return type(p)(new, p.right) if i == 0 else type(p)(p.left, new)
    if isinstance(p, (Suspend, SignalDecl)):
        return type(p)(p.s, new)
    if isinstance(p, Loop):
        return make_loop(new)
    return type(p)(new)


def candidates(p: Statement) -> Iterator[Statement]:
    """Smaller variants of ``p``: children, simpler leaves, shrunk subterms."""
    for c in children(p):
        yield c
    if not isinstance(p, Const) or p.k > 1:
        yield Const(0)
        yield Const(1)
    if isinstance(p, Const) and p.k > 2:
        yield Const(p.k - 1)
    if isinstance(p, AwaitImmediate) and not p.positive:
        yield AwaitImmediate(p.s)
    for i, c in enumerate(children(p)):
        for smaller in candidates(c):
            yield _replace_child(p, i, smaller)


def shrink(p: Statement, fails: Callable[[Statement], bool], max_rounds: int = 200) -> Statement:
    """Greedy shrinking: keep the first smaller candidate that still fails."""
    for _ in range(max_rounds):
        for q in candidates(p):
            try:
                still = fails(q)
            except Exception:
                still = False
            if still:
                p = q
                break
        else:
            return p
    return p
