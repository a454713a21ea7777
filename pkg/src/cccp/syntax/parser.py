"""Recursive-descent parser for the ASCII concrete syntax.

Grammar, loosest binding first::

    W ::= W | W                          parallel, left associative
        | P + P                          choice, left associative
        | c?[x].P                        active receiver (body extends right)
        | new c:(n, v).W  |  new c:(0, -).W
        | fix X. P                       (body extends right)
        | c!<e>.P | c!<e>
        | c?(x).P else Q | c?(x).P      (missing else means nil)
        | c?*(x).P                       persistent receiver
        | sigma.P | sigma^n.P | sigma | sigma^n | tau.P | tau
        | [b] P else Q
        | X | nil | ( W )
    e ::= v | x | compose(e, e)
    b ::= e = e | exp(c)

Prefix continuations and sum operands are prefix-level terms, so
``c!<v>.P + Q`` is ``(c!<v>.P) + Q``.  Process variables start with an
upper-case letter.  Identifiers starting with ``_`` are reserved for
generated names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .analysis import check_guarded
from .terms import (
    ActiveRecv, Alphabet, Compose, Delay, Eq, Exposed, Fix, FreePVar, FreeVar,
    Lit, Match, Nil, Par, PVar, Recv, Restrict, Send, Sum, Tau, Term, Var,
    bound_channel, is_process,
)

KEYWORDS = {"nil", "sigma", "tau", "fix", "new", "else", "exp", "compose", "let"}
RESERVED_PREFIX = "_"

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[!<>.?()\[\]*=|+:,\-^])
""", re.VERBOSE)


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "sym" or "eof"
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


class Parser:
    def __init__(self, tokens: list[Token], alphabet: Alphabet | None = None,
                 allow_open: bool = False, allow_reserved: bool = False,
                 macros: dict[str, list[Token]] | None = None):
        self.tokens = tokens
        self.pos = 0
        self.alphabet = alphabet
        self.allow_open = allow_open
        self.allow_reserved = allow_reserved
        self.macros = macros or {}
        self.data: list[str] = []
        self.procs: list[str | None] = []
        self.chans: list[str] = []
        self.expansions = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "ident") and self.tok.text == text

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def ident(self, what: str) -> Token:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        if tok.text.startswith(RESERVED_PREFIX) and not self.allow_reserved:
            raise self.error(f"identifier {tok.text!r} uses the reserved prefix '_'")
        return self.advance()

    def integer(self) -> int:
        if self.tok.kind != "int":
            raise self.error(f"expected an integer, found {self.tok.text or 'end of input'!r}")
        return int(self.advance().text)

    # -- names

    def channel(self) -> str:
        tok = self.ident("a channel name")
        if tok.text[0].isupper():
            raise self.error(f"channel names start in lower case, got {tok.text!r}", tok)
        for level in range(len(self.chans) - 1, -1, -1):
            if self.chans[level] == tok.text:
                return bound_channel(level)
        return tok.text

    def value_name(self) -> str:
        tok = self.ident("a value")
        if self.alphabet is not None and tok.text not in self.alphabet:
            raise self.error(f"unknown value {tok.text!r}", tok)
        return tok.text

    # -- expressions

    def expr(self):
        if self.at("compose"):
            start = self.advance()
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            if (isinstance(a, Lit) and isinstance(b, Lit) and self.alphabet is not None
                    and not self.alphabet.composable(a.value, b.value)):
                raise self.error(f"compose({a.value}, {b.value}) is undefined", start)
            return Compose(a, b)
        tok = self.ident("an expression")
        name = tok.text
        for i in range(len(self.data) - 1, -1, -1):
            if self.data[i] == name:
                return Var(len(self.data) - 1 - i, name)
        if self.alphabet is None or name in self.alphabet:
            return Lit(name)
        if self.allow_open:
            return FreeVar(name)
        raise self.error(f"unknown value {name!r}", tok)

    def boolean(self):
        if self.at("exp"):
            self.advance()
            self.expect("(")
            c = self.channel()
            self.expect(")")
            return Exposed(c)
        a = self.expr()
        self.expect("=")
        return Eq(a, self.expr())

    # -- terms

    def need_process(self, term: Term, tok: Token, where: str) -> Term:
        if not is_process(term):
            raise self.error(f"{where} must be a process, not a system term", tok)
        return term

    def parallel(self) -> Term:
        left = self.choice()
        while self.at("|"):
            self.advance()
            left = Par(left, self.choice())
        return left

    def choice(self) -> Term:
        start = self.tok
        left = self.prefix()
        while self.at("+"):
            self.advance()
            self.need_process(left, start, "operand of '+'")
            rtok = self.tok
            right = self.need_process(self.prefix(), rtok, "operand of '+'")
            left = Sum(left, right)
        return left

    def continuation(self, required: bool = True) -> Term:
        """Parse ``. P`` after a prefix; with ``required`` False it may be absent."""
        if not required and not self.at("."):
            return Nil()
        self.expect(".")
        tok = self.tok
        return self.need_process(self.prefix(), tok, "continuation")

    def process_body(self) -> Term:
        tok = self.tok
        return self.need_process(self.choice(), tok, "body")

    def prefix(self) -> Term:
        tok = self.tok
        if tok.kind == "eof":
            raise self.error("unexpected end of input")
        if self.at("("):
            self.advance()
            inner = self.parallel()
            self.expect(")")
            return inner
        if self.at("["):
            self.advance()
            cond = self.boolean()
            self.expect("]")
            t1 = self.tok
            then = self.need_process(self.prefix(), t1, "match branch")
            self.expect("else")
            t2 = self.tok
            return Match(cond, then, self.need_process(self.prefix(), t2, "match branch"))
        if tok.kind != "ident":
            raise self.error(f"unexpected {tok.text!r}")
        word = tok.text
        if word == "nil":
            self.advance()
            return Nil()
        if word == "sigma":
            self.advance()
            n = 1
            if self.accept("^"):
                n = self.integer()  # sigma^0.P is just P
            cont = self.continuation(required=False)
            for _ in range(n):
                cont = Delay(cont)
            return cont
        if word == "tau":
            self.advance()
            return Tau(self.continuation(required=False))
        if word == "fix":
            self.advance()
            name = self.ident("a process variable")
            if not name.text[0].isupper():
                raise self.error("process variables start in upper case", name)
            self.expect(".")
            self.procs.append(name.text)
            body = self.process_body()
            self.procs.pop()
            return self.guarded(Fix(body, name.text), tok)
        if word == "new":
            self.advance()
            name = self.ident("a channel name").text
            self.expect(":")
            self.expect("(")
            n = self.integer()
            self.expect(",")
            vtok = self.tok
            if self.accept("-"):
                value = None
            else:
                value = self.value_name()
            self.expect(")")
            if (n == 0) != (value is None):
                raise self.error("annotation must be (0, -) or (n, v) with n > 0", vtok)
            self.expect(".")
            self.chans.append(name)
            body = self.prefix()
            self.chans.pop()
            return Restrict(n, value, body, name)
        if word in KEYWORDS:
            raise self.error(f"unexpected keyword {word!r}")
        if word[0].isupper():
            return self.process_variable()
        return self.channel_prefix()

    def process_variable(self) -> Term:
        tok = self.advance()
        name = tok.text
        for i in range(len(self.procs) - 1, -1, -1):
            if self.procs[i] == name:
                return PVar(len(self.procs) - 1 - i, name)
        if name in self.macros:
            # textual expansion: the body sees the binders around the use site
            self.expansions += 1
            if self.expansions > 10_000:
                raise self.error(f"definition {name!r} expands without end", tok)
            lp, rp = Token("sym", "(", tok.line, tok.col), Token("sym", ")", tok.line, tok.col)
            self.pos -= 1
            self.tokens[self.pos:self.pos + 1] = [lp, *self.macros[name], rp]
            return self.prefix()
        if self.allow_open:
            return FreePVar(name)
        raise self.error(f"unbound process variable {name!r}", tok)

    def channel_prefix(self) -> Term:
        c = self.channel()
        if self.accept("!"):
            self.expect("<")
            e = self.expr()
            self.expect(">")
            return Send(c, e, self.continuation(required=False))
        self.expect("?")
        if self.accept("["):
            x = self.ident("a variable").text
            self.expect("]")
            self.expect(".")
            self.data.append(x)
            body = self.process_body()
            self.data.pop()
            return ActiveRecv(c, body, x)
        persistent = self.accept("*")
        self.expect("(")
        x = self.ident("a variable").text
        self.expect(")")
        if persistent:
            self.procs.append(None)
        self.data.append(x)
        body = self.continuation()
        self.data.pop()
        if persistent:
            self.procs.pop()
            return Fix(Recv(c, body, PVar(0, "X"), x), "X")
        timeout = Nil()
        if self.accept("else"):
            t = self.tok
            timeout = self.need_process(self.prefix(), t, "timeout branch")
        return Recv(c, body, timeout, x)

    def guarded(self, fix: Fix, tok: Token) -> Fix:
        path = check_guarded(fix)
        if path:
            raise self.error("unguarded recursion: " + " > ".join(path), tok)
        return fix

    def finish(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r} after term")


def parse_term(text: str, alphabet: Alphabet | None = None, *, allow_open: bool = False,
               allow_reserved: bool = False, macros: dict[str, list[Token]] | None = None) -> Term:
    """Parse a system term."""
    p = Parser(tokenize(text), alphabet, allow_open, allow_reserved, macros)
    term = p.parallel()
    p.finish()
    return term


def parse_process(text: str, alphabet: Alphabet | None = None, **kwargs) -> Term:
    term = parse_term(text, alphabet, **kwargs)
    if not is_process(term):
        raise ParseError("expected a process, got a system term", 1, 1)
    return term


def _check_acyclic(macros: dict[str, list[Token]]) -> None:
    """Reject definitions that (indirectly) mention themselves."""
    uses = {}
    for name, toks in macros.items():
        bound = {b.text for a, b in zip(toks, toks[1:]) if a.text == "fix"}
        uses[name] = {t.text for t in toks if t.text in macros and t.text not in bound}
    state: dict[str, int] = {}

    def visit(name):
        state[name] = 1
        for m in sorted(uses[name]):
            if state.get(m) == 1:
                tok = macros[name][0]
                raise ParseError(f"definition {name!r} expands without end", tok.line, 1)
            if m not in state:
                visit(m)
        state[name] = 2

    for name in macros:
        if name not in state:
            visit(name)


def parse_program(text: str, alphabet: Alphabet | None = None, **kwargs) -> Term:
    """Parse a term file.

    Lines of the form ``let Name = term`` define abbreviations usable as
    ``Name`` in later lines.  Expansion is textual (in parentheses), so a
    definition may mention channels and variables bound where it is used.
    Everything else forms the main term.
    """
    macros: dict[str, list[Token]] = {}
    body: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if stripped.startswith("let ") or stripped == "let":
            m = re.fullmatch(r"let\s+([A-Z][A-Za-z0-9_']*)\s*=\s*(.*)", stripped)
            if not m:
                raise ParseError("malformed definition, expected 'let Name = term'", lineno, 1)
            try:
                toks = tokenize(m.group(2))[:-1]
                # check the definition on its own, leaving its free names open
                parse_term(m.group(2), alphabet, macros=macros,
                           **{**kwargs, "allow_open": True})
            except ParseError as exc:
                raise ParseError(exc.message, lineno, exc.col) from None
            macros[m.group(1)] = [Token(t.kind, t.text, lineno, t.col) for t in toks]
            body.append("")
        else:
            body.append(line)
    if not any(b.split("#", 1)[0].strip() for b in body):
        raise ParseError("file contains no term", 1, 1)
    _check_acyclic(macros)
    return parse_term("\n".join(body), alphabet, macros=macros, **kwargs)
