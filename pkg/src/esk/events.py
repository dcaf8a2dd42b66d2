"""Signal statuses and scoped events.

An :class:`Event` is an ordered tuple of ``(signal, status)`` bindings. A later
binding of a name shadows earlier ones, which is how local declarations that
reuse an outer name are represented. Output events always cover the whole
visible domain: a signal that is not emitted is bound to ``MINUS``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from esk.errors import EskError, UnboundSignal


class Status(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    BOT = "?"

    def __str__(self):
        return self.value

    def leq(self, other: Status) -> bool:
        """Flat Scott order: BOT below both PLUS and MINUS."""
        return self is Status.BOT or self is other

    def lt(self, other: Status) -> bool:
        return self is Status.BOT and other is not Status.BOT

    def neg(self) -> Status:
        if self is Status.PLUS:
            return Status.MINUS
        if self is Status.MINUS:
            return Status.PLUS
        return self

    def and_(self, other: Status) -> Status:
        if self is Status.MINUS or other is Status.MINUS:
            return Status.MINUS
        if self is Status.PLUS and other is Status.PLUS:
            return Status.PLUS
        return Status.BOT

    def or_(self, other: Status) -> Status:
        if self is Status.PLUS or other is Status.PLUS:
            return Status.PLUS
        if self is Status.MINUS and other is Status.MINUS:
            return Status.MINUS
        return Status.BOT

    @classmethod
    def of_bool(cls, b: bool) -> Status:
        return cls.PLUS if b else cls.MINUS

    @classmethod
    def parse(cls, text: str) -> Status:
        try:
            return {"+": cls.PLUS, "-": cls.MINUS, "?": cls.BOT, "⊥": cls.BOT}[text]
        except KeyError:
            raise ValueError(f"bad status {text!r}") from None


PLUS, MINUS, BOT = Status.PLUS, Status.MINUS, Status.BOT


class DomainMismatch(EskError, ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Event:
    bindings: tuple[tuple[str, Status], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, Status] | Iterable[tuple[str, Status]] = ()) -> Event:
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(tuple((s, st) for s, st in items))

    @classmethod
    def absent(cls, signals: Iterable[str]) -> Event:
        return cls(tuple((s, MINUS) for s in signals))

    @classmethod
    def parse(cls, text: str) -> Event:
        """Inverse of :meth:`serialize`; also accepts ``s,+`` pairs separated by blanks."""
        bindings = []
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            text = text[1:-1]
        for part in text.replace(",", " ").replace("=", " ").split():
            if part in ("+", "-", "?", "⊥"):
                if not bindings or bindings[-1][1] is not None:
                    raise ValueError(f"dangling status in {text!r}")
                bindings[-1] = (bindings[-1][0], Status.parse(part))
            else:
                bindings.append((part, None))
        if any(st is None for _, st in bindings):
            raise ValueError(f"missing status in {text!r}")
        return cls(tuple(bindings))

    def __contains__(self, s: str) -> bool:
        return any(name == s for name, _ in self.bindings)

    def __getitem__(self, s: str) -> Status:
        for name, st in reversed(self.bindings):
            if name == s:
                return st
        raise UnboundSignal(s)

    def get(self, s: str, default: Status = BOT) -> Status:
        for name, st in reversed(self.bindings):
            if name == s:
                return st
        return default

    def __len__(self):
        return len(self.bindings)

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.bindings)

    def visible(self) -> dict[str, Status]:
        """Innermost binding of every name."""
        return dict(self.bindings)

    def add(self, s: str, st: Status) -> Event:
        return Event(self.bindings + ((s, st),))

    def set(self, s: str, st: Status) -> Event:
        """Replace the innermost binding of ``s``."""
        for i in range(len(self.bindings) - 1, -1, -1):
            if self.bindings[i][0] == s:
                b = list(self.bindings)
                b[i] = (s, st)
                return Event(tuple(b))
        raise UnboundSignal(s)

    def restrict(self, s: str) -> Event:
        """Drop the innermost binding of ``s``; an outer ``s`` left visible becomes MINUS."""
        for i in range(len(self.bindings) - 1, -1, -1):
            if self.bindings[i][0] == s:
                b = list(self.bindings[:i] + self.bindings[i + 1:])
                for j in range(len(b) - 1, -1, -1):
                    if b[j][0] == s:
                        b[j] = (s, MINUS)
                        break
                return Event(tuple(b))
        raise UnboundSignal(s)

    def empty(self) -> Event:
        """The event emitting nothing over the same domain."""
        return Event(tuple((s, MINUS) for s, _ in self.bindings))

    def union(self, other: Event) -> Event:
        self._check_domain(other)
        return Event(tuple((s, a.or_(b)) for (s, a), (_, b) in zip(self.bindings, other.bindings)))

    def is_total(self) -> bool:
        return all(st is not BOT for _, st in self.bindings)

    def leq(self, other: Event) -> bool:
        self._check_domain(other)
        return all(a.leq(b) for (_, a), (_, b) in zip(self.bindings, other.bindings))

    def emitted(self) -> frozenset[str]:
        return frozenset(s for s, st in self.visible().items() if st is PLUS)

    def serialize(self) -> str:
        return ",".join(f"{s}={st}" for s, st in sorted(self.visible().items()))

    def _check_domain(self, other: Event):
        if self.domain != other.domain:
            raise DomainMismatch(f"domains differ: {self.domain} vs {other.domain}")

    def __str__(self):
        return "{" + self.serialize() + "}"


def add(E: Event, s: str, st: Status) -> Event:
    return E.add(s, st)


def restrict(E: Event, s: str) -> Event:
    return E.restrict(s)


def union(E1: Event, E2: Event) -> Event:
    return E1.union(E2)


def is_total(E: Event) -> bool:
    return E.is_total()


def event_leq(E1: Event, E2: Event) -> bool:
    return E1.leq(E2)


def c_to_k(E: Event) -> Event:
    """Read a total constructive event as a logical one."""
    if not E.is_total():
        raise ValueError(f"event {E} is not total")
    return E
