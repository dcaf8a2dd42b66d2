"""Executable semantics for Kernel Esterel.

The package implements the logical and constructive behavioral semantics,
the constructive state semantics, the token-based microstep semantics and a
multi-instant reaction driver, together with a differential harness that
checks the relations between them.
"""

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
    delta,
    down_code,
    par_code,
    up_code,
)
from esk.events import Event, Status
from esk.errors import (
    Blocked,
    EskError,
    InstantaneousLoop,
    NonConstructive,
    NoReaction,
    ParseError,
    UnboundSignal,
)

__all__ = [
    "AwaitImmediate",
    "Blocked",
    "Const",
    "Emit",
    "EskError",
    "Event",
    "If",
    "InstantaneousLoop",
    "Loop",
    "NoReaction",
    "NonConstructive",
    "Par",
    "ParseError",
    "Seq",
    "Shift",
    "SignalDecl",
    "Statement",
    "Status",
    "Suspend",
    "Trap",
    "UnboundSignal",
    "delta",
    "down_code",
    "par_code",
    "up_code",
]
