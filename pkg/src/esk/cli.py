"""Command line: ``esk run``, ``esk check`` and ``esk difftest``.

Exit codes: 0 when everything went fine, 1 when the program (or a file) is
rejected, 2 when an internal invariant breaks.
"""

from __future__ import annotations

import argparse
import sys

from esk import potentials
from esk.driver import (
    CONSTRUCTIVE,
    ENGINES,
    ProgramInterface,
    classify,
    classify_instant,
    format_trace,
    parse_inputs,
    parse_program,
    run,
    settle,
)
from esk.errors import EskError, InstantaneousLoop, NoReaction, ParseError
from esk.events import Event
from esk.states import expand, is_state

OK, REJECTED, BROKEN = 0, 1, 2


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def _source(residue):
    return expand(residue) if is_state(residue) else residue


def _explain(P: ProgramInterface, residue, I: Event, out) -> None:
    source = _source(residue)
    E, _ = settle(source, P.input_event(I), P.outputs)
    print(f"# Must/Can under {E}", file=out)
    for line in potentials.explain(source, E):
        print("#   " + line, file=out)


def _taxonomy(P: ProgramInterface, residue, I: Event, error: NoReaction) -> str:
    """Name the kind of rejection the way ``esk check`` would."""
    if isinstance(error, InstantaneousLoop):
        return "instantaneous loop"
    try:
        verdict = classify_instant(P.with_body(_source(residue)), I)
    except EskError:
        return "rejected"
    if verdict.kind == CONSTRUCTIVE:
        return "rejected"  # only the engine at hand could not decide
    return verdict.kind


def cmd_run(args) -> int:
    P = parse_program(_read(args.program))
    inputs = parse_inputs(_read(args.inputs)) if args.inputs else [Event()]
    micro = {}
    dots = []
    if args.engine == "micro":
        if args.step_trace:
            from esk.microstep import format_step

            micro["on_step"] = lambda n, step, before: print(format_step(n, step))
        if args.dump_dot:
            from esk.microstep import to_dot

            micro["on_normal_form"] = lambda nf: dots.append(to_dot(nf))
    elif args.step_trace or args.dump_dot:
        print("error: --step-trace and --dump-dot need --engine micro", file=sys.stderr)
        return REJECTED
    status = OK
    try:
        trace = run(P, inputs, args.engine, **micro)
    except NoReaction as e:
        n = e.instant
        I = P.input_event(inputs[n])
        print(f"instant {n} {I} rejected: {_taxonomy(P, e.residue, inputs[n], e)} ({e})")
        if args.explain:
            _explain(P, e.residue, inputs[n], sys.stdout)
        trace, status = [], REJECTED
    else:
        residue = P.body
        for n, r in enumerate(trace):
            print(r.line())
            if args.explain and args.engine in ("cbs", "css"):
                _explain(P, residue, inputs[n], sys.stdout)
            residue = r.residue
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as f:
            f.write(format_trace(trace))
    if args.dump_dot:
        with open(args.dump_dot, "w", encoding="utf-8") as f:
            f.write("\n".join(dots) + "\n")
    return status


def cmd_check(args) -> int:
    P = parse_program(_read(args.file))
    v = classify(P)
    if v.kind == CONSTRUCTIVE:
        print(CONSTRUCTIVE)
        return OK
    line = f"{v.kind} under {v.inputs}: {v.reactions} LBS reaction{'s' if v.reactions != 1 else ''}"
    print(line + (f" ({v.detail})" if v.detail else ""))
    return REJECTED


def cmd_difftest(args) -> int:
    from esk.difftest import difftest

    report = difftest(args.seed, args.count, args.depth, shrinking=not args.no_shrink)
    print(report.format())
    return OK if report.ok else BROKEN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="esk", description="Kernel Esterel semantics")
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a program over a stream of inputs")
    r.add_argument("--engine", choices=ENGINES, default="cbs")
    r.add_argument("--program", required=True, metavar="FILE")
    r.add_argument("--inputs", metavar="FILE", help="one instant per line, e.g. 'a,+ b,-'")
    r.add_argument("--trace", metavar="FILE", help="write 'I ⊢ O | k' lines here")
    r.add_argument("--explain", action="store_true", help="show Must/Can for each instant")
    r.add_argument("--step-trace", action="store_true", help="print every microstep (micro only)")
    r.add_argument("--dump-dot", metavar="FILE", help="write normal forms as DOT (micro only)")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("check", help="classify the first instant of a program")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("difftest", help="random differential testing of all semantics")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--count", type=int, default=100)
    d.add_argument("--depth", type=int, default=5)
    d.add_argument("--no-shrink", action="store_true")
    d.set_defaults(func=cmd_difftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return REJECTED
    except (AssertionError, EskError) as e:
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return BROKEN


if __name__ == "__main__":
    sys.exit(main())
