"""Static queries over terms: free names, closedness, guardedness."""

from __future__ import annotations

from .terms import (
    ActiveRecv, Compose, Delay, Eq, Exposed, Fix, FreePVar, FreeVar, Lit, Match,
    Nil, Par, PVar, Recv, Restrict, Send, Sum, Tau, Term, _proc_closed,
    bound_channel,
)


def _channels(term: Term, depth: int, sends_only: bool) -> set[str]:
    match term:
        case Nil() | PVar() | FreePVar():
            return set()
        case Send(c, _, k):
            return {c} | _channels(k, depth, sends_only)
        case Recv(c, body, timeout):
            out = _channels(body, depth, sends_only) | _channels(timeout, depth, sends_only)
            return out if sends_only else out | {c}
        case Delay(k) | Tau(k):
            return _channels(k, depth, sends_only)
        case Sum(a, b) | Par(a, b):
            return _channels(a, depth, sends_only) | _channels(b, depth, sends_only)
        case Match(cond, x, y):
            out = _channels(x, depth, sends_only) | _channels(y, depth, sends_only)
            if isinstance(cond, Exposed) and not sends_only:
                out.add(cond.chan)
            return out
        case Fix(body):
            return _channels(body, depth, sends_only)
        case ActiveRecv(c, body):
            out = _channels(body, depth, sends_only)
            return out if sends_only else out | {c}
        case Restrict(_, _, body):
            return _channels(body, depth + 1, sends_only) - {bound_channel(depth)}
    raise TypeError(term)


def fsn(term: Term, depth: int = 0) -> frozenset[str]:
    """Free channels on which ``term`` may broadcast."""
    return frozenset(_channels(term, depth, True))


def free_channels(term: Term, depth: int = 0) -> frozenset[str]:
    """Every free channel mentioned by ``term``."""
    return frozenset(_channels(term, depth, False))


def literals(term: Term) -> set[str]:
    """Value names appearing literally in ``term`` (annotations included)."""
    out: set[str] = set()

    def expr(e):
        match e:
            case Lit(v):
                out.add(v)
            case Compose(a, b):
                expr(a)
                expr(b)

    def go(t):
        match t:
            case Send(_, e, k):
                expr(e)
                go(k)
            case Recv(_, a, b) | Sum(a, b) | Par(a, b):
                go(a)
                go(b)
            case Match(cond, a, b):
                if isinstance(cond, Eq):
                    expr(cond.left)
                    expr(cond.right)
                go(a)
                go(b)
            case Delay(k) | Tau(k) | Fix(k) | ActiveRecv(_, k):
                go(k)
            case Restrict(_, v, body):
                if v is not None:
                    out.add(v)
                go(body)

    go(term)
    return out


def free_names(term: Term) -> tuple[set[str], set[str]]:
    """Names of free data variables and free process variables."""
    data: set[str] = set()
    procs: set[str] = set()

    def expr(e):
        match e:
            case FreeVar(n):
                data.add(n)
            case Compose(a, b):
                expr(a)
                expr(b)

    def go(t):
        match t:
            case FreePVar(n):
                procs.add(n)
            case Send(_, e, k):
                expr(e)
                go(k)
            case Recv(_, a, b) | Sum(a, b) | Par(a, b):
                go(a)
                go(b)
            case Match(cond, a, b):
                if isinstance(cond, Eq):
                    expr(cond.left)
                    expr(cond.right)
                go(a)
                go(b)
            case Delay(k) | Tau(k) | Fix(k) | ActiveRecv(_, k) | Restrict(_, _, k):
                go(k)

    go(term)
    return data, procs


def is_closed(term: Term) -> bool:
    """No free data variables and no free process variables."""
    data, procs = free_names(term)
    return not data and not procs and _proc_closed(term)


def check_guarded(term: Term) -> list[str] | None:
    """Return None if every recursion variable is guarded.

    Otherwise return the path (from the offending ``fix`` down to the
    variable) of the first unguarded occurrence.
    """

    def find(t, target: int, path: list[str]) -> list[str] | None:
        # Looks for an unguarded occurrence of PVar(target) in t.
        match t:
            case PVar(i) if i == target:
                return path + [t.name]
            case Tau(k):
                return find(k, target, path + ["tau"])
            case Sum(a, b):
                return (find(a, target, path + ["left summand"])
                        or find(b, target, path + ["right summand"]))
            case Fix(body):
                return find(body, target + 1, path + [f"fix {t.var}"])
        return None

    def go(t, path: list[str]) -> list[str] | None:
        match t:
            case Fix(body, x):
                hit = find(body, 0, [f"fix {x}"])
                if hit:
                    return path + hit
                return go(body, path + [f"fix {x}"])
            case Send(_, _, k) | Delay(k) | Tau(k):
                return go(k, path)
            case Recv(_, a, b) | Sum(a, b) | Par(a, b) | Match(_, a, b):
                return go(a, path) or go(b, path)
            case ActiveRecv(_, k) | Restrict(_, _, k):
                return go(k, path)
        return None

    return go(term, [])
