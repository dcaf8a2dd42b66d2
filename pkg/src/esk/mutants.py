"""Deliberately broken variants of the semantics, to show the properties bite."""

from __future__ import annotations

from contextlib import contextmanager
from unittest import mock

from esk import behavioral, potentials
from esk.events import MINUS, PLUS
from esk.kernel import Par


def _par_without_delta(k, left, right):
    return Par(left, right)


def _swapped_flag(b, must_codes_left):
    return MINUS if b is PLUS and 0 in must_codes_left else PLUS


@contextmanager
def delta_drop():
    """The parallel rule forgets to reset the derivative of a finished parallel."""
    with mock.patch.object(behavioral, "par_derivative", _par_without_delta):
        yield


@contextmanager
def can_flag_swap():
    """Can of a sequence's right side uses the negated flag."""
    with mock.patch.object(potentials, "seq_continuation_flag", _swapped_flag):
        yield


MUTANTS = {"delta-drop": delta_drop, "can-flag-swap": can_flag_swap}
