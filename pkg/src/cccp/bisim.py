"""Weak bisimilarity over the extensional LTS.

The decision procedure is signature refinement on the saturated transition
relation of the disjoint union of the two state spaces.  ``naive_bisimilar``
is a separate greatest-fixpoint computation on pairs that works from the
definition directly; it is slow and serves as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .channelenv import Configuration
from .extensional import (
    INTERNAL, Deliver, ExtAction, ExtLTS, Idle, action_key, build_lts,
    default_channels, weak_closure,
)
from .intensional import Semantics

MODES = {None: frozenset(), "no-gamma": frozenset({Deliver}), "no-iota": frozenset({Idle})}


@dataclass(frozen=True)
class Step:
    """One move of a distinguishing play.

    ``side`` is the configuration that performs ``action``; the other side
    cannot match it (or every match is distinguished further down).
    """

    action: ExtAction
    side: str  # "left" or "right"


@dataclass
class Verdict:
    bisimilar: bool
    distinguisher: list[Step] | None
    witness: set[tuple[int, int]]
    lts1: ExtLTS
    lts2: ExtLTS
    rounds: int
    mode: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def states(self) -> tuple[int, int]:
        return len(self.lts1), len(self.lts2)

    def report(self) -> dict:
        return {
            "verdict": "bisimilar" if self.bisimilar else "not bisimilar",
            "distinguisher": None if self.distinguisher is None
            else [{"action": str(s.action), "side": s.side} for s in self.distinguisher],
            "witness_size": len(self.witness),
            "states": {"left": len(self.lts1), "right": len(self.lts2)},
            "transitions": {"left": self.lts1.num_transitions(),
                            "right": self.lts2.num_transitions()},
            "rounds": self.rounds,
            "mode": self.mode or "sound",
        }


def _idle_set(conf: Configuration, channels) -> frozenset[str]:
    return frozenset(c for c in channels if conf.env.is_idle(c))


def _union(lts1: ExtLTS, lts2: ExtLTS):
    n1 = len(lts1)
    states = lts1.states + lts2.states
    weak = weak_closure(lts1) + [
        {a: frozenset(t + n1 for t in ts) for a, ts in w.items()} for w in weak_closure(lts2)
    ]
    return n1, states, weak


def refine(states: list[Configuration], weak: list[dict], channels, use_idle: bool):
    """Signature refinement; returns the list of successive partitions."""
    if use_idle:
        first: dict = {}
        blocks = [first.setdefault(_idle_set(c, channels), len(first)) for c in states]
    else:
        blocks = [0] * len(states)
    history = [blocks]
    # intern actions so signatures hash cheaply
    codes: dict[ExtAction, int] = {}
    wk = [[(codes.setdefault(a, len(codes)), ts) for a, ts in w.items()] for w in weak]
    while True:
        numbering: dict = {}
        new = []
        for s in range(len(states)):
            sig = frozenset((a, blocks[t]) for a, ts in wk[s] for t in ts)
            new.append(numbering.setdefault((blocks[s], sig), len(numbering)))
        if len(numbering) == len(set(blocks)):
            return history
        blocks = new
        history.append(blocks)


def _explain(s: int, t: int, history, states, weak, channels, n1) -> list[Step]:
    """Build a distinguishing play for states in different final blocks."""
    steps: list[Step] = []
    side_of = lambda x: "left" if x < n1 else "right"  # noqa: E731
    while True:
        r = next(i for i, b in enumerate(history) if b[s] != b[t])
        if r == 0:
            idle_s = _idle_set(states[s], channels)
            idle_t = _idle_set(states[t], channels)
            if idle_s - idle_t:
                c = min(idle_s - idle_t)
                steps.append(Step(Idle(c), side_of(s)))
            else:
                c = min(idle_t - idle_s)
                steps.append(Step(Idle(c), side_of(t)))
            return steps
        prev = history[r - 1]
        found = None
        for x, y in ((s, t), (t, s)):
            sig_y = {(a, prev[v]) for a, vs in weak[y].items() for v in vs}
            for a in sorted(weak[x], key=action_key):
                for x2 in sorted(weak[x][a]):
                    if (a, prev[x2]) not in sig_y:
                        found = (x, y, a, x2)
                        break
                if found:
                    break
            if found:
                break
        assert found is not None, "partition history is inconsistent"
        x, y, a, x2 = found
        steps.append(Step(a, side_of(x)))
        answers = sorted(weak[y].get(a, ()), key=lambda v: -next(
            i for i, b in enumerate(history) if b[x2] != b[v]))
        if not answers:
            return steps
        # follow the answer that survives longest
        s, t = x2, answers[0]


def bisimilar(c1: Configuration, c2: Configuration, sem: Semantics,
              channels: Iterable[str] = (), max_states: int = 100_000,
              mode: str | None = None) -> Verdict:
    """Decide ``c1 ~ c2`` (weak bisimilarity) over the observed channels.

    The channel set is ``channels`` together with every channel free in
    either term or exposed in either environment.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    drop = MODES[mode]
    chans = default_channels([c1, c2], channels)
    lts1 = build_lts(c1, sem, chans, max_states, drop)
    lts2 = build_lts(c2, sem, chans, max_states, drop)
    n1, states, weak = _union(lts1, lts2)
    history = refine(states, weak, chans, Idle not in drop)
    final = history[-1]
    same = final[0] == final[n1]
    witness = {(i, j - n1) for i in range(n1) for j in range(n1, len(states))
               if final[i] == final[j]} if same else set()
    dist = None if same else _explain(0, n1, history, states, weak, chans, n1)
    return Verdict(same, dist, witness, lts1, lts2, len(history), mode)


def naive_bisimilar(lts1: ExtLTS, lts2: ExtLTS) -> bool:
    """Greatest fixpoint on pairs, strong move against weak answer."""

    def weak_moves(lts: ExtLTS):
        memo_tau: dict[int, frozenset[int]] = {}

        def taus(s):
            if s not in memo_tau:
                seen, todo = {s}, [s]
                while todo:
                    u = todo.pop()
                    for a, v in lts.edges[u]:
                        if a == INTERNAL and v not in seen:
                            seen.add(v)
                            todo.append(v)
                memo_tau[s] = frozenset(seen)
            return memo_tau[s]

        memo: dict = {}

        def answer(s, a):
            if (s, a) not in memo:
                if a == INTERNAL:
                    memo[s, a] = taus(s)
                else:
                    out = set()
                    for u in taus(s):
                        for b, v in lts.edges[u]:
                            if b == a:
                                out |= taus(v)
                    memo[s, a] = frozenset(out)
            return memo[s, a]

        return answer

    w1, w2 = weak_moves(lts1), weak_moves(lts2)
    rel = {(s, t) for s in range(len(lts1)) for t in range(len(lts2))}
    changed = True
    while changed:
        changed = False
        for s, t in list(rel):
            ok = all(any((s2, t2) in rel for t2 in w2(t, a)) for a, s2 in lts1.edges[s])
            ok = ok and all(any((s2, t2) in rel for s2 in w1(s, a)) for a, t2 in lts2.edges[t])
            if not ok:
                rel.discard((s, t))
                changed = True
    return (0, 0) in rel


@dataclass(frozen=True)
class Violation:
    pair: tuple[int, int]
    side: str
    action: ExtAction
    target: int

    def __str__(self):
        return f"pair {self.pair}: {self.side} move {self.action} to {self.target} is unmatched"


def check_witness(lts1: ExtLTS, lts2: ExtLTS, relation: Iterable[tuple[int, int]],
                  require_root: bool = True) -> Violation | None:
    """Check that ``relation`` (pairs of state ids) is a weak bisimulation."""
    rel = set(relation)
    if require_root and (0, 0) not in rel:
        return Violation((0, 0), "root", INTERNAL, 0)
    weak1, weak2 = weak_closure(lts1), weak_closure(lts2)
    for s, t in sorted(rel):
        for a, s2 in lts1.edges[s]:
            if not any((s2, t2) in rel for t2 in weak2[t].get(a, ())):
                return Violation((s, t), "left", a, s2)
        for a, t2 in lts2.edges[t]:
            if not any((s2, t2) in rel for s2 in weak1[s].get(a, ())):
                return Violation((s, t), "right", a, t2)
    return None


def relation_from_predicate(lts1: ExtLTS, lts2: ExtLTS, pred) -> set[tuple[int, int]]:
    """All state pairs whose configurations satisfy ``pred(conf1, conf2)``."""
    return {(i, j) for i, c1 in enumerate(lts1.states) for j, c2 in enumerate(lts2.states)
            if pred(c1, c2)}


def reachable_pairs(lts1: ExtLTS, lts2: ExtLTS,
                    relation: Iterable[tuple[int, int]]) -> set[tuple[int, int]]:
    """Pairs of ``relation`` reachable from the root pair by matched moves.

    A move of either side to ``s2`` answered by a weak move of the other side
    to ``t2`` leads to ``(s2, t2)`` whenever that pair is in the relation.
    """
    rel = set(relation)
    if (0, 0) not in rel:
        return set()
    weak1, weak2 = weak_closure(lts1), weak_closure(lts2)
    seen, todo = {(0, 0)}, [(0, 0)]
    while todo:
        s, t = todo.pop()
        nxt = [(s2, t2) for a, s2 in lts1.edges[s] for t2 in weak2[t].get(a, ())]
        nxt += [(s2, t2) for a, t2 in lts2.edges[t] for s2 in weak1[s].get(a, ())]
        for p in nxt:
            if p in rel and p not in seen:
                seen.add(p)
                todo.append(p)
    return seen
