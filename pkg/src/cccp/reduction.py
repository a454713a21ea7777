"""Reduction semantics, barbs and well-formedness of configurations."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from .channelenv import ChannelEnv, Configuration, upd
from .intensional import Semantics
from .labels import SIGMA, TAU, Label, Out
from .syntax import ActiveRecv, Par, Restrict, Term, bound_channel, is_process

INSTANT = "inst"
TIMED = "timed"


class Tristate(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    INDETERMINATE = "indeterminate"

    def __bool__(self):
        raise TypeError("a Tristate must be compared explicitly")


@dataclass(frozen=True)
class Reduction:
    kind: str  # INSTANT or TIMED
    label: Label
    target: Configuration


def reductions(conf: Configuration, sem: Semantics) -> list[Reduction]:
    """Instantaneous reductions (broadcasts and tau) and the timed one, if any."""
    env, term = conf.env, conf.term
    out = []
    for c, v, w in sorted(sem.sends(env, term), key=repr):
        out.append(Reduction(INSTANT, Out(c, v), Configuration(upd(env, Out(c, v), sem.alphabet), w)))
    for w in sorted(sem.taus(env, term), key=repr):
        out.append(Reduction(INSTANT, TAU, Configuration(env, w)))
    for w in sorted(sem.sigmas(env, term), key=repr):
        out.append(Reduction(TIMED, SIGMA, Configuration(upd(env, SIGMA, sem.alphabet), w)))
    return out


def instantaneous(conf: Configuration, sem: Semantics) -> list[Configuration]:
    return [r.target for r in reductions(conf, sem) if r.kind == INSTANT]


def timed(conf: Configuration, sem: Semantics) -> list[Configuration]:
    return [r.target for r in reductions(conf, sem) if r.kind == TIMED]


def strong_barb(conf: Configuration, chan: str) -> bool:
    return conf.env.is_exposed(chan)


def weak_barb(conf: Configuration, chan: str, sem: Semantics, budget: int = 10_000) -> Tristate:
    """Does some reduct (instantaneous or timed steps) expose ``chan``?

    ``budget`` bounds the number of configurations visited.  Running out of
    budget with unexplored states left gives INDETERMINATE.
    """
    seen = {conf}
    queue = deque([conf])
    while queue:
        cur = queue.popleft()
        if strong_barb(cur, chan):
            return Tristate.TRUE
        for r in reductions(cur, sem):
            if r.target not in seen:
                if len(seen) >= budget:
                    return Tristate.INDETERMINATE
                seen.add(r.target)
                queue.append(r.target)
    return Tristate.FALSE


def well_formed(conf: Configuration) -> bool:
    """Active receivers only listen on exposed channels."""

    def go(env: ChannelEnv, term: Term, depth: int) -> bool:
        if is_process(term):
            return True
        match term:
            case ActiveRecv(c):
                return env.is_exposed(c)
            case Par(a, b):
                return go(env, a, depth) and go(env, b, depth)
            case Restrict(n, v, body):
                return go(env.set(bound_channel(depth), n, v), body, depth + 1)
        raise TypeError(term)

    return go(conf.env, conf.term, 0)


def instantaneous_bound(conf: Configuration, sem: Semantics, cap: int = 100_000) -> int | None:
    """Length of the longest chain of instantaneous reductions.

    Returns None if more than ``cap`` configurations would be needed or an
    instantaneous cycle is found (neither happens for well-formed terms).
    """
    longest: dict[Configuration, int] = {}
    on_stack: set[Configuration] = set()

    # iterative DFS postorder
    stack = [(conf, iter(instantaneous(conf, sem)))]
    on_stack.add(conf)
    while stack:
        node, children = stack[-1]
        child = next(children, None)
        if child is None:
            stack.pop()
            on_stack.discard(node)
            longest[node] = max((1 + longest[c] for c in instantaneous(node, sem)), default=0)
            continue
        if child in on_stack:
            return None
        if child not in longest:
            if len(longest) + len(on_stack) >= cap:
                return None
            on_stack.add(child)
            stack.append((child, iter(instantaneous(child, sem))))
    return longest[conf]


@dataclass
class TraceNode:
    conf: Configuration
    children: list[tuple[Reduction, "TraceNode"]] = field(default_factory=list)


def trace(conf: Configuration, sem: Semantics, depth: int) -> TraceNode:
    """Tree of all reduction sequences of length at most ``depth``."""
    root = TraceNode(conf)
    if depth > 0:
        for r in reductions(conf, sem):
            root.children.append((r, trace(r.target, sem, depth - 1)))
    return root


def trace_graph(root: TraceNode) -> tuple[list[Configuration], list[tuple[int, str, str, int]]]:
    """Number the configurations of a trace tree breadth-first.

    Equal configurations share one id; edges are ``(src, kind, label, dst)``.
    """
    ids: dict[Configuration, int] = {}
    states: list[Configuration] = []
    edges: list[tuple[int, str, str, int]] = []

    def ident(c: Configuration) -> int:
        if c not in ids:
            ids[c] = len(ids)
            states.append(c)
        return ids[c]

    queue = deque([root])
    ident(root.conf)
    while queue:
        node = queue.popleft()
        src = ident(node.conf)
        for r, child in node.children:
            edge = (src, r.kind, str(r.label), ident(child.conf))
            if edge not in edges:
                edges.append(edge)
            queue.append(child)
    return states, edges


def format_trace(root: TraceNode) -> str:
    """Dump a trace tree as numbered states and ``id -kind:label-> id`` edges."""
    states, edges = trace_graph(root)
    lines = [f"{i}: {c}" for i, c in enumerate(states)]
    lines += [f"{s} -{k}:{a}-> {t}" for s, k, a, t in edges]
    return "\n".join(lines) + "\n"
