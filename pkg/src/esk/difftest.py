"""Differential and property-based testing of all the semantics at once.

Each property takes a program and a seed and returns a list of problems. The
seed fixes every other random choice (events, input streams, schedules), so a
failing program can be shrunk while the rest of the case is rebuilt from the
same seed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from esk import potentials
from esk.behavioral import cbs_step, check_potentials, check_transition, lbs_check, lbs_transitions
from esk.driver import ProgramInterface, run
from esk.errors import NoReaction
from esk.events import BOT, MINUS, PLUS, Event
from esk.gen import random_event, random_inputs, random_program, shrink
from esk.kernel import Statement, free_signals, has_loop, size, subterms
from esk.microstep import (
    RESUME,
    START,
    WHITE_ALL,
    BudgetExceeded,
    MicroError,
    Micro,
    from_cmd,
    from_term,
    is_total,
    measure,
    micro_run,
    mleq,
    mlt,
    nodes,
    sel_skeleton,
    set_gr,
    to_term,
    vc_check,
)
from esk.states import base, check_state_transition, css_step, expand, is_state
from esk.syntax import print_statement

Problems = list[str]


def _event(p: Statement, seed: int) -> Event:
    rng = random.Random(seed * 7919 + 1)
    return random_event(rng, sorted(free_signals(p)))


def _weaken(E: Event, rng: random.Random) -> Event:
    """``E`` with some statuses forgotten."""
    return Event(tuple((s, BOT if rng.random() < 0.4 else st) for s, st in E.bindings))


# -- behavioral -------------------------------------------------------------


def _cbs(p: Statement, E: Event):
    try:
        return cbs_step(p, E)
    except NoReaction:
        return None


def prop_refinement(p: Statement, seed: int) -> Problems:
    """A constructive transition under a total event is a logical one."""
    E = _event(p, seed)
    t = _cbs(p, E)
    if t is None or lbs_check(p, E, t):
        return []
    return [f"CBS transition {t} under {E} is not an LBS transition"]


def prop_structure(p: Statement, seed: int) -> Problems:
    """Inert derivative, domain invariance, totality and determinism of CBS."""
    E = _event(p, seed)
    t = _cbs(p, E)
    if t is None:
        return []
    problems = check_transition(p, E, t)
    again = _cbs(p, E)
    if again is None or again.key() != t.key():
        problems.append("CBS gave two different results for the same input")
    return problems


def prop_potentials(p: Statement, seed: int) -> Problems:
    """Must/Can bracket every transition: logical, constructive and state."""
    E = _event(p, seed)
    problems = []
    t = _cbs(p, E)
    if t is not None:
        problems += [f"CBS: {x}" for x in check_potentials(p, E, t)]
    for u in lbs_transitions(p, E):
        problems += [f"LBS: {x}" for x in check_potentials(p, E, u)]
    for term, E_now, tr in _css_steps(p, seed):
        source = expand(term) if is_state(term) else term
        problems += [f"CSS: {x}" for x in check_potentials(source, E_now, tr)]
    return problems


def _weakenings(E: Event) -> list[Event]:
    """Every event obtained from ``E`` by forgetting some statuses."""
    out = []
    for mask in itertools.product((False, True), repeat=len(E.bindings)):
        out.append(Event(tuple((s, BOT if forget else st) for (s, st), forget in zip(E.bindings, mask))))
    return out


def prop_monotone(p: Statement, seed: int) -> Problems:
    """Must grows and Can shrinks as the event and the flag gain information.

    Checked for every subterm, on every comparable pair of weakenings of a
    random total event.
    """
    for q in dict.fromkeys(subterms(p)):
        problems = _monotone_at(q, _event(q, seed))
        if problems:
            return problems
    return []


def _monotone_at(p: Statement, E: Event) -> Problems:
    events = _weakenings(E)
    must = {E: potentials.must(p, E) for E in events}
    can = {(b, E): potentials.can(b, p, E) for E in events for b in (MINUS, PLUS)}
    for E1 in events:
        for E2 in events:
            if not E1.leq(E2):
                continue
            if not must[E1] <= must[E2]:
                return [f"Must of {print_statement(p)} not monotone: {E1} <= {E2}"]
            for b1, b2 in ((MINUS, MINUS), (MINUS, PLUS), (PLUS, PLUS)):
                if not can[b2, E2] <= can[b1, E1]:
                    return [f"Can of {print_statement(p)} not antimonotone: "
                            f"flag {b1} <= {b2}, {E1} <= {E2}"]
    return []


# -- state semantics ----------------------------------------------------------


def _inputs(p: Statement, seed: int) -> list[Event]:
    rng = random.Random(seed * 31 + 5)
    return random_inputs(rng, sorted(free_signals(p)))


def _css_steps(p: Statement, seed: int):
    """(term, event, transition) for each instant of a CSS run on random inputs."""
    term = p
    for E in _inputs(p, seed):
        try:
            t = css_step(term, E)
        except NoReaction:
            return
        yield term, E, t
        if t.code != 1:
            return
        term = t.derivative


def prop_state_structure(p: Statement, seed: int) -> Problems:
    problems = []
    for term, E, t in _css_steps(p, seed):
        problems += check_state_transition(term, E, t)
    return problems


def _interface(p: Statement, seed: int) -> ProgramInterface:
    rng = random.Random(seed * 13 + 3)
    outputs = [s for s in sorted(free_signals(p)) if rng.random() < 0.4]
    return ProgramInterface.infer(p, outputs)


def _trace(P: ProgramInterface, inputs, engine: str):
    try:
        return [(r.inputs, r.outputs, r.code) for r in run(P, inputs, engine)], None
    except NoReaction as e:
        return None, (type(e).__name__, e.instant)


def prop_cbs_css(p: Statement, seed: int) -> Problems:
    """CBS and CSS give the same program-level traces, and CBS on the expansion
    of a state reacts like the state."""
    P = _interface(p, seed)
    inputs = [P.input_event({s: E[s] for s in P.inputs}) for E in _inputs(p, seed)]
    a, b = _trace(P, inputs, "cbs"), _trace(P, inputs, "css")
    if a != b:
        return [f"traces differ: cbs {_show(a)} / css {_show(b)}"]
    problems = []
    for term, E, t in _css_steps(p, seed):
        if not is_state(term):
            continue
        # The expansion of a state drops the suspensions around it, so it only
        # agrees with the state for the instant at hand.
        t1 = _cbs(expand(term), E)
        if t1 is None or (t1.output, t1.code) != (t.output, t.code):
            problems.append(f"CBS on the expansion gives {t1}, CSS {t} under {E}")
            break
    return problems


def _show(trace) -> str:
    ok, err = trace
    if err is not None:
        return f"{err[0]} at instant {err[1]}"
    return " ; ".join(f"{i} ⊢ {o} | {k}" for i, o, k in ok)


# -- microsteps --------------------------------------------------------------


@dataclass
class MicroStats:
    """Cases where the microsteps decide more than Must/Can (see the README)."""
    micro_only: int = 0


def _start(term) -> Micro:
    return set_gr(from_term(term), RESUME if is_state(term) else START)


def _micro_checked(E: Event, m: Micro, schedule: str, seed: int, problems: Problems) -> Micro | None:
    """Run to a normal form, checking every step."""

    def on_step(n, step, before):
        rule, path, _, _, after = step
        where = f"step #{n} ({rule} at {'.'.join(map(str, path)) or '.'})"
        if not mlt(before, after):
            problems.append(f"{where}: not a strict increase")
        if sel_skeleton(before) != sel_skeleton(after):
            problems.append(f"{where}: structure or Sel changed")
        if before.in_color() != after.in_color():
            problems.append(f"{where}: root in-color changed")
        if measure(after) >= measure(before):
            problems.append(f"{where}: measure did not decrease")
        changed = [(q, a, b) for (q, a), (_, b) in zip(nodes(before), nodes(after))
                   if (a.in_color(), a.out) != (b.in_color(), b.out)]
        if len(changed) != 1 or changed[0][0] != path:
            problems.append(f"{where}: change is not local: {[q for q, _, _ in changed]}")
        problems.extend(f"{where}: {v}" for v in vc_check(E, after))

    try:
        return micro_run(E, m, schedule, seed=seed, on_step=on_step)
    except BudgetExceeded as e:
        problems.append(f"{schedule}: {e}")
        return None


def _micro_instants(p: Statement, seed: int):
    """(term, event) for each instant of the CSS run, which micro replays."""
    for term, E, t in _css_steps(p, seed):
        yield term, E, t


def prop_micro_css(p: Statement, seed: int, stats: MicroStats | None = None) -> Problems:
    """Micro normal forms read back as the CSS transition, surface and depth."""
    problems: Problems = []
    term = p
    for E in _inputs(p, seed):
        try:
            t = css_step(term, E)
        except NoReaction:
            t = None
        nf = micro_run(E, _start(term))
        if not is_total(nf):
            if t is not None:
                problems.append(f"micro stuck where CSS reacts to {E} ({t})")
            return problems
        try:
            back, code, out = to_term(nf, E)
        except MicroError as e:
            problems.append(f"read-back failed: {e}")
            return problems
        if t is None:
            # Micro justifies a reaction Must/Can cannot; nothing to compare.
            if stats is not None:
                stats.micro_only += 1
            return problems
        code = 0 if code is None else code
        if (out, code) != (t.output, t.code):
            problems.append(f"under {E}: micro {out} | {code}, CSS {t.output} | {t.code}")
            return problems
        if back != t.derivative and not (t.code != 1 and not is_state(back) and base(term) == back):
            problems.append(f"under {E}: micro term differs from CSS term")
            return problems
        if t.code != 1:
            return problems
        term = t.derivative
    return problems


def prop_micro_meta(p: Statement, seed: int) -> Problems:
    """Step-level invariants and confluence over five schedules."""
    problems: Problems = []
    E = _event(p, seed)
    m = _start(p)
    problems += [f"initial: {v}" for v in vc_check(E, m)]
    finals = set()
    for schedule, s in [("first", None), ("last", None)] + [("random", seed + i) for i in range(3)]:
        nf = _micro_checked(E, m, schedule, s, problems)
        if nf is not None:
            finals.add(nf)
        if problems:
            return problems
    if len(finals) > 1:
        problems.append(f"{len(finals)} different normal forms")
    return problems


def prop_micro_inert(p: Statement, seed: int) -> Problems:
    """A microstate that is neither started nor resumed ends entirely dead."""
    E = _event(p, seed)
    m = from_cmd(p).with_in(MINUS, MINUS, MINUS)
    nf = micro_run(E, m)
    bad = [".".join(map(str, q)) or "." for q, n in nodes(nf) if n.out != WHITE_ALL or BOT in n.in_color()]
    return [f"inert run leaves live nodes at {bad}"] if bad else []


def prop_micro_monotone(p: Statement, seed: int) -> Problems:
    """More information on signals or on the root input gives a larger normal form."""
    rng = random.Random(seed)
    E2 = _event(p, seed)
    E1 = _weaken(E2, rng)
    problems = []
    m = _start(p)
    if not mleq(micro_run(E1, m), micro_run(E2, m)):
        problems.append(f"normal form under {E1} is not below the one under {E2}")
    weak = m.with_in(BOT, BOT, BOT)
    if not mleq(micro_run(E2, weak), micro_run(E2, m)):
        problems.append("normal form with unknown root input is not below the started one")
    return problems


# -- driver ----------------------------------------------------------------


@dataclass(frozen=True)
class Property:
    name: str
    check: Callable[[Statement, int], Problems]
    micro: bool = False  # loop-free programs only


PROPERTIES = (
    Property("refinement", prop_refinement),
    Property("structure", prop_structure),
    Property("potentials", prop_potentials),
    Property("monotonicity", prop_monotone),
    Property("state-structure", prop_state_structure),
    Property("cbs-css", prop_cbs_css),
    Property("micro-css", prop_micro_css, micro=True),
    Property("micro-meta", prop_micro_meta, micro=True),
    Property("micro-inert", prop_micro_inert, micro=True),
    Property("micro-monotone", prop_micro_monotone, micro=True),
)


@dataclass
class Failure:
    prop: str
    seed: int
    program: Statement
    problems: Problems
    shrunk: Statement | None = None

    def __str__(self):
        lines = [f"[{self.prop}] seed {self.seed}: {print_statement(self.program)}"]
        if self.shrunk is not None and self.shrunk != self.program:
            lines.append(f"  shrunk: {print_statement(self.shrunk)}")
        lines += [f"  {x}" for x in self.problems[:5]]
        return "\n".join(lines)


@dataclass
class Report:
    seed: int
    count: int
    depth: int
    checked: dict[str, int] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    micro: MicroStats = field(default_factory=MicroStats)

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed(self, prop: str) -> list[Failure]:
        return [f for f in self.failures if f.prop == prop]

    def format(self) -> str:
        lines = [f"difftest seed={self.seed} count={self.count} depth={self.depth}"]
        for name, n in self.checked.items():
            lines.append(f"  {name:16} {n:5} checked  {len(self.failed(name))} failed")
        lines.append(f"  micro decided {self.micro.micro_only} instants Must/Can rejects")
        lines += [str(f) for f in self.failures]
        lines.append("OK" if self.ok else f"FAILED ({len(self.failures)})")
        return "\n".join(lines)


def _run_prop(prop: Property, p: Statement, seed: int, stats: MicroStats | None = None) -> Problems:
    try:
        if prop.name == "micro-css":
            return prop_micro_css(p, seed, stats)
        return prop.check(p, seed)
    except AssertionError as e:
        return [f"assertion: {e}"]


def difftest(seed: int = 0, count: int = 100, depth: int = 5, *,
             properties=PROPERTIES, shrinking: bool = True, max_failures: int = 10) -> Report:
    """Check every property on ``count`` programs drawn from ``seed``."""
    report = Report(seed, count, depth, {prop.name: 0 for prop in properties})
    for i in range(count):
        case_seed = seed * 100003 + i
        general = random_program(case_seed, depth)
        loop_free = general if not has_loop(general) else random_program(case_seed, depth, loops=False)
        for prop in properties:
            p = loop_free if prop.micro else general
            problems = _run_prop(prop, p, case_seed, report.micro)
            report.checked[prop.name] += 1
            if not problems:
                continue
            failure = Failure(prop.name, case_seed, p, problems)
            if shrinking and size(p) < 60:
                failure.shrunk = shrink(p, lambda q: bool(_run_prop(prop, q, case_seed)))
                failure.problems = _run_prop(prop, failure.shrunk, case_seed) or problems
            report.failures.append(failure)
            if len(report.failures) >= max_failures:
                return report
    return report
