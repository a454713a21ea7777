"""Pretty-printer producing text that parses back to an equal term.

Besides operator levels the printer tracks what follows the current
position: ``fix`` and active-receiver bodies extend to the right and would
swallow a following ``+``, and a receiver without ``else`` would capture a
following ``else``.
"""

from __future__ import annotations

from .analysis import free_channels, free_names, literals
from .terms import (
    ActiveRecv, Compose, Delay, Exposed, Fix, FreePVar, FreeVar, Lit, Match,
    Nil, Par, PVar, Recv, Restrict, Send, Sum, Tau, Term, Var,
)

PAR, CHOICE, PREFIX = 0, 1, 2


def _fresh(hint: str, taken) -> str:
    if hint not in taken:
        return hint
    base = hint.rstrip("0123456789") or hint
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def _mentions_pvar(term: Term, target: int) -> bool:
    match term:
        case PVar(i):
            return i == target
        case Fix(body):
            return _mentions_pvar(body, target + 1)
        case Send(_, _, k) | Delay(k) | Tau(k) | ActiveRecv(_, k) | Restrict(_, _, k):
            return _mentions_pvar(k, target)
        case Recv(_, a, b) | Sum(a, b) | Match(_, a, b) | Par(a, b):
            return _mentions_pvar(a, target) or _mentions_pvar(b, target)
    return False


def _is_persistent(t: Term) -> bool:
    return (isinstance(t, Fix) and isinstance(t.body, Recv)
            and t.body.timeout == PVar(0) and not _mentions_pvar(t.body.body, 0))


def _level(t: Term) -> int:
    if isinstance(t, Par):
        return PAR
    if isinstance(t, Sum):
        return CHOICE
    return PREFIX


class Printer:
    def __init__(self, term: Term):
        data, procs = free_names(term)
        self.avoid_data = literals(term) | data
        self.avoid_procs = set(procs)
        self.avoid_chans = {c for c in free_channels(term) if not c.startswith("#")}
        self.data: list[str] = []
        self.procs: list[str | None] = []
        self.chans: list[str] = []

    # -- leaves

    def expr(self, e) -> str:
        match e:
            case Lit(v):
                return v
            case Var(i):
                return self.data[-1 - i] if i < len(self.data) else f"_{i}"
            case FreeVar(n):
                return n
            case Compose(a, b):
                return f"compose({self.expr(a)}, {self.expr(b)})"
        raise TypeError(e)

    def chan(self, c: str) -> str:
        if c.startswith("#") and int(c[1:]) < len(self.chans):
            return self.chans[int(c[1:])]
        return c

    def bool(self, b) -> str:
        if isinstance(b, Exposed):
            return f"exp({self.chan(b.chan)})"
        return f"{self.expr(b.left)} = {self.expr(b.right)}"

    def bind_data(self, hint: str) -> str:
        name = _fresh(hint, self.avoid_data | set(self.data))
        self.data.append(name)
        return name

    # -- terms

    def term(self, t: Term, ctx: int = PAR, plus: bool = False, els: bool = False) -> str:
        if _level(t) < ctx:
            return f"({self._term(t, False, False)})"
        return self._term(t, plus, els)

    def _tail(self, k: Term, plus: bool, els: bool) -> str:
        return "" if isinstance(k, Nil) else "." + self.term(k, PREFIX, plus, els)

    def _term(self, t: Term, plus: bool, els: bool) -> str:
        match t:
            case Nil():
                return "nil"
            case Send(c, e, k):
                return f"{self.chan(c)}!<{self.expr(e)}>{self._tail(k, plus, els)}"
            case Delay():
                n = 0
                while isinstance(t, Delay):
                    n += 1
                    t = t.cont
                head = "sigma" if n == 1 else f"sigma^{n}"
                return head + self._tail(t, plus, els)
            case Tau(k):
                return "tau" + self._tail(k, plus, els)
            case Recv(c, body, timeout, x):
                with_else = els or not isinstance(timeout, Nil)
                name = self.bind_data(x)
                # without an else the body's tail is followed by whatever follows us
                inner = self.term(body, PREFIX, plus and not with_else, with_else)
                self.data.pop()
                text = f"{self.chan(c)}?({name}).{inner}"
                if with_else:
                    text += " else " + self.term(timeout, PREFIX, plus, els)
                return text
            case Fix(Recv(c, body, _, x)) if _is_persistent(t):
                self.procs.append(None)
                name = self.bind_data(x)
                inner = self.term(body, PREFIX, plus, els)
                self.data.pop()
                self.procs.pop()
                return f"{self.chan(c)}?*({name}).{inner}"
            case Sum(a, b):
                return f"{self.term(a, CHOICE, True, False)} + {self.term(b, PREFIX, plus, els)}"
            case Match(cond, x, y):
                return (f"[{self.bool(cond)}] {self.term(x, PREFIX, False, True)} else "
                        f"{self.term(y, PREFIX, plus, els)}")
            case PVar(i):
                if i < len(self.procs) and self.procs[-1 - i]:
                    return self.procs[-1 - i]
                return f"_P{i}"
            case FreePVar(n):
                return n
            case Fix(body, x):
                if plus:
                    return f"({self._term(t, False, False)})"
                name = _fresh(x, self.avoid_procs | {p for p in self.procs if p})
                self.procs.append(name)
                inner = self.term(body, CHOICE, False, els)
                self.procs.pop()
                return f"fix {name}. {inner}"
            case ActiveRecv(c, body, x):
                if plus:
                    return f"({self._term(t, False, False)})"
                name = self.bind_data(x)
                inner = self.term(body, CHOICE, False, els)
                self.data.pop()
                return f"{self.chan(c)}?[{name}].{inner}"
            case Par(a, b):
                return f"{self.term(a, PAR)} | {self.term(b, CHOICE)}"
            case Restrict(n, v, body, c):
                name = _fresh(c, self.avoid_chans | set(self.chans))
                self.chans.append(name)
                inner = self.term(body, PREFIX, plus, els)
                self.chans.pop()
                ann = f"({n}, {v})" if v is not None else "(0, -)"
                return f"new {name}:{ann}.{inner}"
        raise TypeError(t)


def pretty(term: Term) -> str:
    return Printer(term).term(term)
