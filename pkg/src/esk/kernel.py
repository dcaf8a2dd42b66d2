"""Kernel Esterel statements and the completion-code algebra.

Statements are immutable and hashable; every semantics in the package works
on the same symbolic tree. Traps are anonymous: ``Const(k)`` with ``k >= 2``
exits the trap found by crossing ``k - 2`` enclosing traps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True, slots=True)
class Const:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"completion code must be >= 0, got {self.k}")

    def __str__(self):
        return str(self.k)


@dataclass(frozen=True, slots=True)
class Emit:
    s: str


@dataclass(frozen=True, slots=True)
class AwaitImmediate:
    """``awimm s`` (``positive``) or ``awimm ¬s`` (waits for absence)."""

    s: str
    positive: bool = True


@dataclass(frozen=True, slots=True)
class If:
    s: str
    then: Statement
    else_: Statement


@dataclass(frozen=True, slots=True)
class Suspend:
    s: str
    body: Statement


@dataclass(frozen=True, slots=True)
class Seq:
    left: Statement
    right: Statement


@dataclass(frozen=True, slots=True)
class Par:
    left: Statement
    right: Statement


@dataclass(frozen=True, slots=True)
class Loop:
    body: Statement


@dataclass(frozen=True, slots=True)
class Trap:
    body: Statement


@dataclass(frozen=True, slots=True)
class Shift:
    body: Statement


@dataclass(frozen=True, slots=True)
class SignalDecl:
    s: str
    body: Statement


Statement = Union[
    Const, Emit, AwaitImmediate, If, Suspend, Seq, Par, Loop, Trap, Shift, SignalDecl
]

NOTHING = Const(0)
PAUSE = Const(1)


def down_code(k: int) -> int:
    """Completion code seen outside a trap."""
    if k < 0:
        raise ValueError(k)
    if k <= 1:
        return k
    if k == 2:
        return 0
    return k - 1


def up_code(k: int) -> int:
    """Completion code seen outside a shift."""
    if k < 0:
        raise ValueError(k)
    return k if k <= 1 else k + 1


def par_code(k1: int, k2: int) -> int:
    return max(k1, k2)


def delta(k: int, p: Statement) -> Statement:
    """Keep the derivative only when the instant paused."""
    return p if k == 1 else NOTHING


def children(p: Statement) -> tuple[Statement, ...]:
    if isinstance(p, (If,)):
        return (p.then, p.else_)
    if isinstance(p, (Seq, Par)):
        return (p.left, p.right)
    if isinstance(p, (Suspend, Loop, Trap, Shift, SignalDecl)):
        return (p.body,)
    return ()


def subterms(p: Statement) -> Iterator[Statement]:
    yield p
    for c in children(p):
        yield from subterms(c)


def size(p: Statement) -> int:
    return sum(1 for _ in subterms(p))


def has_loop(p: Statement) -> bool:
    return any(isinstance(q, Loop) for q in subterms(p))


def free_signals(p: Statement) -> frozenset[str]:
    """Signals read or emitted by ``p`` that are not declared inside it."""
    if isinstance(p, Emit):
        return frozenset({p.s})
    if isinstance(p, AwaitImmediate):
        return frozenset({p.s})
    if isinstance(p, If):
        return free_signals(p.then) | free_signals(p.else_) | {p.s}
    if isinstance(p, Suspend):
        return free_signals(p.body) | {p.s}
    if isinstance(p, SignalDecl):
        return free_signals(p.body) - {p.s}
    out: frozenset[str] = frozenset()
    for c in children(p):
        out |= free_signals(c)
    return out

