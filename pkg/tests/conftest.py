import random

from hypothesis import strategies as st

from esk.events import BOT, MINUS, PLUS, Event
from esk.gen import random_event, random_program
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
    Suspend,
    Trap,
    free_signals,
)

SIGNALS = st.sampled_from(["a", "b", "c", "s", "o"])

# Raw syntax trees: not necessarily well scoped, fine for parsing and printing.
statements = st.recursive(
    st.one_of(
        st.integers(0, 6).map(Const),
        SIGNALS.map(Emit),
        st.builds(AwaitImmediate, SIGNALS, st.booleans()),
    ),
    lambda kids: st.one_of(
        st.builds(If, SIGNALS, kids, kids),
        st.builds(Suspend, SIGNALS, kids),
        st.builds(Seq, kids, kids),
        st.builds(Par, kids, kids),
        st.builds(Loop, kids),
        st.builds(Trap, kids),
        st.builds(Shift, kids),
        st.builds(SignalDecl, SIGNALS, kids),
    ),
    max_leaves=12,
)

statuses = st.sampled_from([PLUS, MINUS, BOT])


@st.composite
def programs(draw, depth=4, loops=True):
    """Well-scoped random programs, drawn through the package's generator."""
    return random_program(draw(st.integers(0, 10**6)), depth, loops=loops)


@st.composite
def program_and_event(draw, depth=4, loops=True, total=True):
    p = draw(programs(depth, loops))
    rng = random.Random(draw(st.integers(0, 10**6)))
    E = random_event(rng, sorted(free_signals(p)), (PLUS, MINUS) if total else (PLUS, MINUS, BOT))
    return p, E


def ev(**kw) -> Event:
    """Event from keywords: ev(s="+", o="-")."""
    return Event(tuple((k, {"+": PLUS, "-": MINUS, "?": BOT}[v]) for k, v in kw.items()))
