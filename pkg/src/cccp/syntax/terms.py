"""Abstract syntax of CCCP terms.

Binders use de Bruijn indices so that alpha-equivalent terms compare (and
hash) equal.  Surface names are kept as hints with ``compare=False`` and are
only consulted by the printer.  Channels bound by ``new`` are named ``#k``
where ``k`` is the number of restrictions enclosing the binder, so a term
never mentions a bound channel by its surface name either.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union


class EvalError(Exception):
    """Raised when an expression cannot be evaluated to a value."""


# -- expressions -------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    value: str


@dataclass(frozen=True)
class Var:
    """Data variable bound by the ``index``-th enclosing receiver."""

    index: int
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class FreeVar:
    """Data variable of an open term."""

    name: str


@dataclass(frozen=True)
class Compose:
    left: "Expr"
    right: "Expr"


Expr = Union[Lit, Var, FreeVar, Compose]


@dataclass(frozen=True)
class Eq:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Exposed:
    chan: str


BoolExpr = Union[Eq, Exposed]


# -- processes ---------------------------------------------------------------


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Send:
    chan: str
    expr: Expr
    cont: "Process"


@dataclass(frozen=True)
class Recv:
    """``c?(x).body else timeout``; ``x`` is bound in ``body`` only."""

    chan: str
    body: "Process"
    timeout: "Process"
    var: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Delay:
    cont: "Process"


@dataclass(frozen=True)
class Tau:
    cont: "Process"


@dataclass(frozen=True)
class Sum:
    left: "Process"
    right: "Process"


@dataclass(frozen=True)
class Match:
    cond: BoolExpr
    then: "Process"
    orelse: "Process"


@dataclass(frozen=True)
class PVar:
    index: int
    name: str = field(default="X", compare=False)


@dataclass(frozen=True)
class FreePVar:
    name: str


@dataclass(frozen=True)
class Fix:
    body: "Process"
    var: str = field(default="X", compare=False)


Process = Union[Nil, Send, Recv, Delay, Tau, Sum, Match, PVar, FreePVar, Fix]
PROCESS_TYPES = (Nil, Send, Recv, Delay, Tau, Sum, Match, PVar, FreePVar, Fix)


# -- systems -----------------------------------------------------------------


@dataclass(frozen=True)
class ActiveRecv:
    """``c?[x].body``: a receiver that has started receiving on ``c``."""

    chan: str
    body: Process
    var: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Par:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Restrict:
    """``new c:(time, value).body``; ``value`` is None iff ``time`` is 0."""

    time: int
    value: str | None
    body: "Term"
    chan: str = field(default="d", compare=False)


Term = Union[Process, ActiveRecv, Par, Restrict]


def is_process(term: Term) -> bool:
    return isinstance(term, PROCESS_TYPES)


def bound_channel(depth: int) -> str:
    return f"#{depth}"


def delay(n: int, cont: Process) -> Process:
    for _ in range(n):
        cont = Delay(cont)
    return cont


def par(*terms: Term) -> Term:
    """Left-nested parallel composition of one or more terms."""
    if not terms:
        raise ValueError("par() needs at least one term")
    out = terms[0]
    for t in terms[1:]:
        out = Par(out, t)
    return out


def par_components(term: Term) -> list[Term]:
    if isinstance(term, Par):
        return par_components(term.left) + par_components(term.right)
    return [term]


# -- value alphabet ----------------------------------------------------------


@dataclass(frozen=True)
class Alphabet:
    """Finite value set with transmission lengths and a partial compose.

    ``err`` is always a member.  Composition absorbs ``err`` on either side.
    """

    deltas: Mapping[str, int]
    compositions: Mapping[tuple[str, str], str] = field(default_factory=dict)
    err: str = "err"

    def __post_init__(self):
        deltas = dict(self.deltas)
        deltas.setdefault(self.err, 1)
        for v, d in deltas.items():
            if not isinstance(d, int) or d < 1:
                raise ValueError(f"value {v!r} needs a positive delta, got {d!r}")
        for (a, b), c in self.compositions.items():
            for name in (a, b, c):
                if name not in deltas:
                    raise ValueError(f"compose mentions unknown value {name!r}")
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "compositions", dict(self.compositions))

    @property
    def values(self) -> tuple[str, ...]:
        return tuple(sorted(self.deltas))

    def __contains__(self, value: str) -> bool:
        return value in self.deltas

    def delta(self, value: str) -> int:
        try:
            return self.deltas[value]
        except KeyError:
            raise EvalError(f"unknown value {value!r}") from None

    def compose(self, a: str, b: str) -> str:
        if (a, b) in self.compositions:
            return self.compositions[(a, b)]
        if a == self.err or b == self.err:
            return self.err
        raise EvalError(f"compose({a}, {b}) is undefined")

    def composable(self, a: str, b: str) -> bool:
        return (a, b) in self.compositions or self.err in (a, b)

    def extended(self, deltas: Mapping[str, int]) -> "Alphabet":
        merged = dict(self.deltas)
        for v, d in deltas.items():
            if v in merged and merged[v] != d:
                raise ValueError(f"value {v!r} already has delta {merged[v]}")
            merged[v] = d
        return Alphabet(merged, self.compositions, self.err)


def evaluate(expr: Expr, alphabet: Alphabet) -> str:
    match expr:
        case Lit(v):
            if v not in alphabet:
                raise EvalError(f"unknown value {v!r}")
            return v
        case Compose(a, b):
            return alphabet.compose(evaluate(a, alphabet), evaluate(b, alphabet))
        case Var() | FreeVar():
            raise EvalError(f"cannot evaluate open expression {expr}")
    raise TypeError(expr)


# -- substitution and shifting -----------------------------------------------
#
# Terms are traversed with two counters: ``d`` counts data binders passed and
# ``p`` counts fix binders passed.


def _map_expr(expr: Expr, d: int, on_var) -> Expr:
    match expr:
        case Var():
            return on_var(expr, d)
        case Compose(a, b):
            return Compose(_map_expr(a, d, on_var), _map_expr(b, d, on_var))
    return expr


def _map_bool(cond: BoolExpr, d: int, on_var) -> BoolExpr:
    if isinstance(cond, Eq):
        return Eq(_map_expr(cond.left, d, on_var), _map_expr(cond.right, d, on_var))
    return cond


def _map(term: Term, d: int, p: int, on_var, on_pvar) -> Term:
    """Rebuild ``term`` applying the callbacks at variable leaves."""

    def go(t, d, p):
        match t:
            case Nil() | FreePVar():
                return t
            case Send(c, e, k):
                return Send(c, _map_expr(e, d, on_var), go(k, d, p))
            case Recv(c, body, timeout, x):
                return Recv(c, go(body, d + 1, p), go(timeout, d, p), x)
            case Delay(k):
                return Delay(go(k, d, p))
            case Tau(k):
                return Tau(go(k, d, p))
            case Sum(a, b):
                return Sum(go(a, d, p), go(b, d, p))
            case Match(b, x, y):
                return Match(_map_bool(b, d, on_var), go(x, d, p), go(y, d, p))
            case PVar():
                return on_pvar(t, d, p)
            case Fix(body, x):
                return Fix(go(body, d, p + 1), x)
            case ActiveRecv(c, body, x):
                return ActiveRecv(c, go(body, d + 1, p), x)
            case Par(a, b):
                return Par(go(a, d, p), go(b, d, p))
            case Restrict(n, v, body, c):
                return Restrict(n, v, go(body, d, p), c)
        raise TypeError(t)

    return go(term, d, p)


def _keep_var(v, d):
    return v


def _keep_pvar(v, d, p):
    return v


def shift_data(term: Term, by: int, cutoff: int = 0) -> Term:
    def on_var(v, d):
        return Var(v.index + by, v.name) if v.index >= cutoff + d else v

    return _map(term, 0, 0, on_var, _keep_pvar)


def shift_proc(term: Term, by: int, cutoff: int = 0) -> Term:
    def on_pvar(v, d, p):
        return PVar(v.index + by, v.name) if v.index >= cutoff + p else v

    return _map(term, 0, 0, _keep_var, on_pvar)


def instantiate(body: Term, value: str, keep_binder: bool = False) -> Term:
    """Substitute ``value`` for the variable of the innermost removed binder.

    ``body`` is the body of a receiver.  With ``keep_binder`` the indices of
    other variables are left alone, as needed when the binder survives
    (a late receiver turning into an active one).
    """

    def on_var(v, d):
        if v.index == d:
            return Lit(value)
        if v.index > d and not keep_binder:
            return Var(v.index - 1, v.name)
        return v

    return _map(body, 0, 0, on_var, _keep_pvar)


def substitute_value(term: Term, var: str, value: str) -> Term:
    """Replace the free data variable ``var`` by ``value``."""

    def on_expr(e: Expr) -> Expr:
        match e:
            case FreeVar(name) if name == var:
                return Lit(value)
            case Compose(a, b):
                return Compose(on_expr(a), on_expr(b))
        return e

    def go(t):
        match t:
            case Send(c, e, k):
                return Send(c, on_expr(e), go(k))
            case Match(Eq(a, b), x, y):
                return Match(Eq(on_expr(a), on_expr(b)), go(x), go(y))
            case Match(b, x, y):
                return Match(b, go(x), go(y))
            case Recv(c, body, timeout, x):
                return Recv(c, go(body), go(timeout), x)
            case Delay(k):
                return Delay(go(k))
            case Tau(k):
                return Tau(go(k))
            case Sum(a, b):
                return Sum(go(a), go(b))
            case Fix(body, x):
                return Fix(go(body), x)
            case ActiveRecv(c, body, x):
                return ActiveRecv(c, go(body), x)
            case Par(a, b):
                return Par(go(a), go(b))
            case Restrict(n, v, body, c):
                return Restrict(n, v, go(body), c)
        return t

    return go(term)


def unfold(fix: Fix) -> Process:
    """One unfolding ``{fix X.P / X} P``."""
    closed = _proc_closed(fix)

    def on_pvar(v, d, p):
        if v.index == p:
            repl = fix if closed else shift_proc(fix, p)
            return repl if d == 0 or closed else shift_data(repl, d)
        if v.index > p:
            return PVar(v.index - 1, v.name)
        return v

    return _map(fix.body, 0, 0, _keep_var, on_pvar)


def _proc_closed(term: Term) -> bool:
    """True when ``term`` has no free bound-style variables of either kind."""

    def expr_ok(e, d):
        match e:
            case Var(i):
                return i < d
            case Compose(a, b):
                return expr_ok(a, d) and expr_ok(b, d)
        return True

    def go(t, d, p):
        match t:
            case Nil() | FreePVar():
                return True
            case PVar(i):
                return i < p
            case Send(_, e, k):
                return expr_ok(e, d) and go(k, d, p)
            case Recv(_, body, timeout):
                return go(body, d + 1, p) and go(timeout, d, p)
            case Delay(k) | Tau(k):
                return go(k, d, p)
            case Sum(a, b) | Par(a, b):
                return go(a, d, p) and go(b, d, p)
            case Match(b, x, y):
                ok = not isinstance(b, Eq) or (expr_ok(b.left, d) and expr_ok(b.right, d))
                return ok and go(x, d, p) and go(y, d, p)
            case Fix(body):
                return go(body, d, p + 1)
            case ActiveRecv(_, body):
                return go(body, d + 1, p)
            case Restrict(_, _, body):
                return go(body, d, p)
        raise TypeError(t)

    return go(term, 0, 0)
