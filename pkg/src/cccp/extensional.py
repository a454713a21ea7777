"""Extensional labelled transition system over configurations."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Union

from .channelenv import Configuration, upd
from .intensional import Semantics
from .labels import SIGMA, In, Out


@dataclass(frozen=True)
class Input:
    chan: str
    value: str

    def __str__(self):
        return f"{self.chan}?{self.value}"


@dataclass(frozen=True)
class Time:
    def __str__(self):
        return "sigma"


@dataclass(frozen=True)
class Internal:
    def __str__(self):
        return "tau"


@dataclass(frozen=True)
class Deliver:
    chan: str
    value: str

    def __str__(self):
        return f"gamma({self.chan},{self.value})"


@dataclass(frozen=True)
class Idle:
    chan: str

    def __str__(self):
        return f"iota({self.chan})"


TIME = Time()
INTERNAL = Internal()

ExtAction = Union[Input, Time, Internal, Deliver, Idle]


def action_key(a: ExtAction) -> tuple:
    order = {Internal: 0, Time: 1, Input: 2, Deliver: 3, Idle: 4}
    return (order[type(a)], str(a))


def ext_next(conf: Configuration, channels: Iterable[str], sem: Semantics,
             drop: frozenset[type] = frozenset()) -> list[tuple[ExtAction, Configuration]]:
    """Extensional transitions of ``conf`` for the observed ``channels``.

    ``drop`` removes whole action kinds (used by the unsound ablations).
    """
    env, term, alpha = conf.env, conf.term, sem.alphabet
    out: list[tuple[ExtAction, Configuration]] = []
    for c in sorted(channels):
        for v in alpha.values:
            after = upd(env, In(c, v), alpha)
            for w in sorted(sem.receives(env, term, c, v), key=repr):
                out.append((Input(c, v), Configuration(after, w)))
    sig = sorted(sem.sigmas(env, term), key=repr)
    after_sigma = upd(env, SIGMA, alpha)
    for w in sig:
        out.append((TIME, Configuration(after_sigma, w)))
    for c, v, w in sorted(sem.sends(env, term), key=repr):
        out.append((INTERNAL, Configuration(upd(env, Out(c, v), alpha), w)))
    for w in sorted(sem.taus(env, term), key=repr):
        out.append((INTERNAL, Configuration(env, w)))
    if sig:
        for c, t, v in env.entries:
            if t == 1:
                for w in sig:
                    out.append((Deliver(c, v), Configuration(after_sigma, w)))
    for c in sorted(channels):
        if env.is_idle(c):
            out.append((Idle(c), conf))
    if drop:
        out = [(a, t) for a, t in out if type(a) not in drop]
    return out


class StateBudgetExceeded(Exception):
    def __init__(self, limit: int, explored: int):
        self.limit = limit
        self.explored = explored
        super().__init__(f"state budget of {limit} exceeded after exploring {explored} states")


@dataclass
class ExtLTS:
    states: list[Configuration]
    edges: list[list[tuple[ExtAction, int]]]
    channels: frozenset[str]
    index: dict[Configuration, int] = field(default_factory=dict)

    @property
    def root(self) -> int:
        return 0

    def __len__(self):
        return len(self.states)

    def transitions(self):
        for s, out in enumerate(self.edges):
            for a, t in out:
                yield s, a, t

    def num_transitions(self) -> int:
        return sum(len(out) for out in self.edges)


def default_channels(confs: Iterable[Configuration], declared: Iterable[str] = ()) -> frozenset[str]:
    from .syntax import free_channels

    out = set(declared)
    for c in confs:
        out |= free_channels(c.term) | c.env.exposed()
    return frozenset(out)


def build_lts(conf: Configuration, sem: Semantics, channels: Iterable[str] | None = None,
              max_states: int = 100_000, drop: frozenset[type] = frozenset()) -> ExtLTS:
    """Breadth-first exploration of the reachable extensional LTS."""
    chans = frozenset(channels) if channels is not None else default_channels([conf])
    lts = ExtLTS([conf], [], chans, {conf: 0})
    queue = deque([0])
    while queue:
        s = queue.popleft()
        out = []
        for a, target in ext_next(lts.states[s], chans, sem, drop):
            t = lts.index.get(target)
            if t is None:
                if len(lts.states) >= max_states:
                    raise StateBudgetExceeded(max_states, len(lts.states))
                t = lts.index[target] = len(lts.states)
                lts.states.append(target)
                queue.append(t)
            out.append((a, t))
        while len(lts.edges) <= s:
            lts.edges.append([])
        lts.edges[s] = sorted(set(out), key=lambda e: (action_key(e[0]), e[1]))
    return lts


def tau_closure(lts: ExtLTS) -> list[frozenset[int]]:
    """States reachable by zero or more tau steps, for each state."""
    succ = [[t for a, t in out if a == INTERNAL] for out in lts.edges]
    closure: list[frozenset[int] | None] = [None] * len(lts)
    for s in range(len(lts)):
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            done = closure[u]
            if done is not None:
                seen |= done
                continue
            for t in succ[u]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        closure[s] = frozenset(seen)
    return closure  # type: ignore[return-value]


def weak_closure(lts: ExtLTS) -> list[dict[ExtAction, frozenset[int]]]:
    """``weak[s][a]`` is the set reachable by ``tau* a tau*``.

    For ``a`` = tau this is ``tau*`` (so it contains ``s``).
    """
    tc = tau_closure(lts)
    weak: list[dict[ExtAction, frozenset[int]]] = []
    for s in range(len(lts)):
        acc: dict[ExtAction, set[int]] = {INTERNAL: set(tc[s])}
        for u in tc[s]:
            for a, t in lts.edges[u]:
                if a == INTERNAL:
                    continue
                acc.setdefault(a, set()).update(tc[t])
        weak.append({a: frozenset(ts) for a, ts in acc.items()})
    return weak


def format_lts(lts: ExtLTS) -> str:
    lines = [f"{i}: {c}" for i, c in enumerate(lts.states)]
    lines += [f"{s} -{a}-> {t}" for s, a, t in lts.transitions()]
    return "\n".join(lines) + "\n"
