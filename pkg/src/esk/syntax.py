"""Textual and symbolic concrete syntax.

Symbolic form (loosest to tightest binding)::

    p || q        parallel, right associative
    p ; q         sequence, right associative
    s ? p : q     presence test      s ⊃ p   suspend     s \\ p   local signal
    ↑p            shift
    p°            loop (``p*`` is accepted too)
    0 1 k         completion codes   !s  emit            {p}     trap
    awimm s       awimm ¬s (``~`` is accepted for ¬)     (p)     grouping

Textual form uses Esterel keywords (``nothing``, ``pause``, ``emit s``,
``await immediate [not] s``, ``if s then p else q end``, ``suspend p when s
end``, ``loop p end``, ``trap T in p end``, ``exit T^k``, ``signal s in p
end``) with ``[ ]`` for grouping. Shift has no keyword; a braced ``{ ... }``
inside textual source holds a symbolic fragment, which is how shifts and exits
escaping every named trap are written.

In symbolic form a state is written with ``^`` before each active leaf:
``^1`` and ``^awimm s``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from esk.errors import ParseError
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
)

SYMBOLIC = "symbolic"
TEXTUAL = "textual"

KEYWORDS = frozenset(
    "nothing pause emit await immediate not if then else end suspend when "
    "loop trap in exit signal awimm".split()
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>\|\||[!?:⊃;°*{}()\[\]↑\\¬~^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], marks: bool = False,
                 mark: Callable | None = None, lift: Callable | None = None):
        self.tokens = tokens
        self.i = 0
        self.marks = marks
        # Hooks used when parsing states: `mark` builds an active leaf and
        # `lift` rebuilds a compound node from possibly-active children.
        self.mark = mark
        self.lift = lift or (lambda ctor, *args: ctor(*args))
        self.traps: list[str] = []

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "ident") and self.tok.text == text

    def take(self, text: str) -> Token:
        if not self.at(text):
            shown = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {shown!r}")
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def ident(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.error(f"expected a signal or trap name, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok.text

    def finish(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")

    # -- symbolic -------------------------------------------------------

    def sym_par(self):
        left = self.sym_seq()
        if self.accept("||"):
            return self.lift(Par, left, self.sym_par())
        return left

    def sym_seq(self):
        left = self.sym_unary()
        if self.accept(";"):
            return self.lift(Seq, left, self.sym_seq())
        return left

    def sym_unary(self):
        if self.accept("↑"):
            return self.lift(Shift, self.sym_unary())
        nxt = self.tokens[self.i + 1]
        if self.tok.kind == "ident" and self.tok.text != "awimm" and nxt.kind == "sym":
            if nxt.text == "?":
                s = self.ident()
                self.take("?")
                p = self.sym_unary()
                self.take(":")
                return self.lift(If, s, p, self.sym_unary())
            if nxt.text == "⊃":
                s = self.ident()
                self.take("⊃")
                return self.lift(Suspend, s, self.sym_unary())
            if nxt.text == "\\":
                s = self.ident()
                self.take("\\")
                return self.lift(SignalDecl, s, self.sym_unary())
        return self.sym_postfix()

    def sym_postfix(self):
        p = self.sym_atom()
        while self.at("°") or self.at("*"):
            self.i += 1
            p = self.lift(Loop, p)
        return p

    def sym_atom(self):
        tok = self.tok
        if self.marks and self.accept("^"):
            leaf = self.sym_atom()
            if not isinstance(leaf, (Const, AwaitImmediate)) or (isinstance(leaf, Const) and leaf.k != 1):
                self.error("only pause and awimm can be marked active", tok)
            return self.mark(leaf)
        if tok.kind == "int":
            self.i += 1
            return Const(int(tok.text))
        if self.accept("!"):
            return Emit(self.ident())
        if self.accept("awimm"):
            positive = not (self.accept("¬") or self.accept("~"))
            return AwaitImmediate(self.ident(), positive)
        if self.accept("{"):
            p = self.sym_par()
            self.take("}")
            return self.lift(Trap, p)
        if self.accept("("):
            p = self.sym_par()
            self.take(")")
            return p
        self.error(f"unexpected {tok.text or 'end of input'!r}")

    # -- textual --------------------------------------------------------

    def txt_par(self):
        left = self.txt_seq()
        if self.accept("||"):
            return Par(left, self.txt_par())
        return left

    def txt_seq(self):
        left = self.txt_stmt()
        if self.accept(";"):
            return Seq(left, self.txt_seq())
        return left

    def txt_stmt(self):
        tok = self.tok
        if self.accept("nothing"):
            return Const(0)
        if self.accept("pause"):
            return Const(1)
        if self.accept("emit"):
            return Emit(self.ident())
        if self.accept("await"):
            self.take("immediate")
            positive = not self.accept("not")
            return AwaitImmediate(self.ident(), positive)
        if self.accept("if"):
            s = self.ident()
            self.take("then")
            p = self.txt_par()
            q = self.txt_par() if self.accept("else") else Const(0)
            self.take("end")
            return If(s, p, q)
        if self.accept("suspend"):
            p = self.txt_par()
            self.take("when")
            s = self.ident()
            self.take("end")
            return Suspend(s, p)
        if self.accept("loop"):
            p = self.txt_par()
            self.take("end")
            return Loop(p)
        if self.accept("trap"):
            name = self.ident()
            self.take("in")
            self.traps.append(name)
            p = self.txt_par()
            self.traps.pop()
            self.take("end")
            return Trap(p)
        if self.accept("exit"):
            name_tok = self.tok
            name = self.ident()
            if name not in self.traps:
                self.error(f"unbound trap name {name!r}", name_tok)
            code = 2 + self.traps[::-1].index(name)
            if self.accept("^"):
                ktok = self.tok
                if ktok.kind != "int":
                    self.error("expected an exit code after '^'")
                self.i += 1
                k = int(ktok.text)
                if k < 2:
                    self.error(f"exit code {k} < 2", ktok)
                if k != code:
                    self.error(f"exit {name}^{k} does not match its trap (code {code})", ktok)
            return Const(code)
        if self.accept("signal"):
            s = self.ident()
            self.take("in")
            p = self.txt_par()
            self.take("end")
            return SignalDecl(s, p)
        if self.accept("["):
            p = self.txt_par()
            self.take("]")
            return p
        if self.accept("("):
            p = self.txt_par()
            self.take(")")
            return p
        if self.accept("{"):
            p = self.sym_par()
            self.take("}")
            return p
        self.error(f"unexpected {tok.text or 'end of input'!r}")


def parse(text: str, form: str = SYMBOLIC) -> Statement:
    parser = _Parser(tokenize(text))
    if form == SYMBOLIC:
        p = parser.sym_par()
    elif form == TEXTUAL:
        p = parser.txt_par()
    else:
        raise ValueError(f"unknown form {form!r}")
    parser.finish()
    return p


def parse_any(text: str) -> Statement:
    """Parse ``text`` as textual syntax, falling back to symbolic."""
    try:
        return parse(text, TEXTUAL)
    except ParseError as textual_error:
        try:
            return parse(text, SYMBOLIC)
        except ParseError:
            raise textual_error from None


# -- printing --------------------------------------------------------------

_PAR, _SEQ, _UNARY, _POSTFIX, _ATOM = range(5)


def _sym(p, ctx: int, leaf: Callable | None = None) -> str:
    if leaf is not None:
        shown = leaf(p)
        if shown is not None:
            return shown if ctx <= _POSTFIX else f"({shown})"
    if isinstance(p, Const):
        return str(p.k)
    if isinstance(p, Emit):
        return f"!{p.s}"
    if isinstance(p, AwaitImmediate):
        return f"awimm {'' if p.positive else '¬'}{p.s}"
    if isinstance(p, Trap):
        return "{" + _sym(p.body, _PAR, leaf) + "}"
    if isinstance(p, Loop):
        text, level = _sym(p.body, _POSTFIX, leaf) + "°", _POSTFIX
    elif isinstance(p, Shift):
        text, level = "↑" + _sym(p.body, _UNARY, leaf), _UNARY
    elif isinstance(p, If):
        text = f"{p.s} ? {_sym(p.then, _UNARY, leaf)} : {_sym(p.else_, _UNARY, leaf)}"
        level = _UNARY
    elif isinstance(p, Suspend):
        text, level = f"{p.s} ⊃ {_sym(p.body, _UNARY, leaf)}", _UNARY
    elif isinstance(p, SignalDecl):
        text, level = f"{p.s} \\ {_sym(p.body, _UNARY, leaf)}", _UNARY
    elif isinstance(p, Seq):
        text, level = f"{_sym(p.left, _UNARY, leaf)} ; {_sym(p.right, _SEQ, leaf)}", _SEQ
    elif isinstance(p, Par):
        text, level = f"{_sym(p.left, _SEQ, leaf)} || {_sym(p.right, _PAR, leaf)}", _PAR
    else:
        raise TypeError(f"not a statement: {p!r}")
    return text if level >= ctx else f"({text})"


def _txt(p: Statement, ctx: int, traps: int) -> str:
    if isinstance(p, Const):
        if p.k == 0:
            return "nothing"
        if p.k == 1:
            return "pause"
        up = p.k - 2
        if up < traps:
            return f"exit T{traps - up}^{p.k}"
        return "{" + str(p.k) + "}"
    if isinstance(p, Emit):
        return f"emit {p.s}"
    if isinstance(p, AwaitImmediate):
        return f"await immediate {'' if p.positive else 'not '}{p.s}"
    if isinstance(p, If):
        return f"if {p.s} then {_txt(p.then, _PAR, traps)} else {_txt(p.else_, _PAR, traps)} end"
    if isinstance(p, Suspend):
        return f"suspend {_txt(p.body, _PAR, traps)} when {p.s} end"
    if isinstance(p, Loop):
        return f"loop {_txt(p.body, _PAR, traps)} end"
    if isinstance(p, Trap):
        return f"trap T{traps + 1} in {_txt(p.body, _PAR, traps + 1)} end"
    if isinstance(p, SignalDecl):
        return f"signal {p.s} in {_txt(p.body, _PAR, traps)} end"
    if isinstance(p, Shift):
        return "{" + _sym(p, _PAR) + "}"
    if isinstance(p, Seq):
        text, level = f"{_txt(p.left, _ATOM, traps)} ; {_txt(p.right, _SEQ, traps)}", _SEQ
    elif isinstance(p, Par):
        text, level = f"{_txt(p.left, _SEQ, traps)} || {_txt(p.right, _PAR, traps)}", _PAR
    else:
        raise TypeError(f"not a statement: {p!r}")
    return text if level >= ctx else f"[{text}]"


def print_statement(p: Statement, form: str = SYMBOLIC) -> str:
    if form == SYMBOLIC:
        return _sym(p, _PAR)
    if form == TEXTUAL:
        return _txt(p, _PAR, 0)
    raise ValueError(f"unknown form {form!r}")
