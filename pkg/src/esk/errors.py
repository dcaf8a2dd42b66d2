"""Exceptions shared by every semantics."""

from __future__ import annotations


class EskError(Exception):
    pass


class ParseError(EskError, ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{message}")


class UnboundSignal(EskError, LookupError):
    def __init__(self, signal: str):
        self.signal = signal
        super().__init__(f"signal {signal!r} is not in scope")


class NoReaction(EskError):
    """The statement has no reaction for the given input event."""


class NonConstructive(NoReaction):
    def __init__(self, *signals: str):
        self.signals = signals
        super().__init__(f"non-constructive: status of {', '.join(signals)} cannot be justified")


class Blocked(NoReaction):
    """A presence test read a signal whose status is still unknown."""

    def __init__(self, signal: str):
        self.signal = signal
        super().__init__(f"blocked on the status of {signal!r}")


class InstantaneousLoop(NoReaction):
    def __init__(self):
        super().__init__("loop body terminated instantly")
