"""Intensional labelled semantics.

Every judgement is computed as the full set of derivable successors, so
properties such as time determinism are checked facts rather than
consequences of the encoding.  One ``Semantics`` object carries the value
alphabet and a memo table keyed on ``(env, term, depth)``.  ``depth`` is the
number of enclosing restrictions and names the next bound channel.

The memo is a plain dict.  Entries are immutable and recomputation is
idempotent, so concurrent use from threads is safe under the GIL; separate
processes should each own a ``Semantics``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .channelenv import ChannelEnv, Configuration, upd
from .labels import SIGMA, TAU, In, Label, Out, Sigma, TauLabel
from .syntax import (
    ActiveRecv, Alphabet, Delay, Eq, Exposed, Fix, Match, Nil, Par, Recv,
    Restrict, Send, Sum, Tau, Term, bound_channel, delay, evaluate, free_channels,
    instantiate, unfold,
)

__all__ = [
    "Label", "Out", "In", "SIGMA", "TAU", "Semantics", "isrcv_term",
    "Step", "Decomposition",
]


def isrcv_term(term: Term, chan: str, depth: int = 0) -> bool:
    """Whether ``term`` has a timeout receiver ready to start on ``chan``."""
    match term:
        case Recv(c):
            return c == chan
        case Sum(a, b) | Par(a, b):
            return isrcv_term(a, chan, depth) or isrcv_term(b, chan, depth)
        case Fix(body):
            return isrcv_term(body, chan, depth)
        case Restrict(_, _, body):
            if chan == bound_channel(depth):
                return False
            return isrcv_term(body, chan, depth + 1)
    return False


@dataclass(frozen=True)
class Step:
    label: Label
    target: Term


@dataclass(frozen=True)
class Decomposition:
    """How a transition of ``W1 | W2`` splits into component moves.

    A side whose label is None does not move.
    """

    left_label: Label | None
    left: Term
    right_label: Label | None
    right: Term


class Semantics:
    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._memo: dict = {}

    def clear(self) -> None:
        self._memo.clear()

    def _cached(self, key, compute):
        try:
            return self._memo[key]
        except KeyError:
            out = self._memo[key] = compute()
            return out

    # -- helpers

    def eval_bool(self, cond, env: ChannelEnv) -> bool:
        match cond:
            case Eq(a, b):
                return evaluate(a, self.alphabet) == evaluate(b, self.alphabet)
            case Exposed(c):
                return env.is_exposed(c)
        raise TypeError(cond)

    def isrcv(self, env: ChannelEnv, term: Term, chan: str, depth: int = 0) -> bool:
        return env.is_idle(chan) and isrcv_term(term, chan, depth)

    @staticmethod
    def _inner_env(env: ChannelEnv, r: Restrict, depth: int) -> ChannelEnv:
        return env.set(bound_channel(depth), r.time, r.value)

    # -- broadcasts: set of (chan, value, target)

    def sends(self, env: ChannelEnv, term: Term, depth: int = 0):
        return self._cached(("send", env, term, depth), lambda: self._sends(env, term, depth))

    def _sends(self, env, term, depth):
        match term:
            case Send(c, e, k):
                v = evaluate(e, self.alphabet)
                return frozenset({(c, v, delay(self.alphabet.delta(v), k))})
            case Sum(a, b):
                return self.sends(env, a, depth) | self.sends(env, b, depth)
            case Fix():
                return self.sends(env, unfold(term), depth)
            case Par(a, b):
                out = set()
                for c, v, a2 in self.sends(env, a, depth):
                    for b2 in self.receives(env, b, c, v, depth):
                        out.add((c, v, Par(a2, b2)))
                for c, v, b2 in self.sends(env, b, depth):
                    for a2 in self.receives(env, a, c, v, depth):
                        out.add((c, v, Par(a2, b2)))
                return frozenset(out)
            case Restrict(n, v0, body, hint):
                name = bound_channel(depth)
                inner = self._inner_env(env, term, depth)
                return frozenset((c, v, Restrict(n, v0, w, hint))
                                 for c, v, w in self.sends(inner, body, depth + 1)
                                 if c != name)
        return frozenset()

    # -- receptions

    def receives(self, env: ChannelEnv, term: Term, chan: str, value: str, depth: int = 0):
        if not self.isrcv(env, term, chan, depth):
            return frozenset({term})
        return self._cached(("recv", env, term, depth, chan, value),
                            lambda: self._receives(env, term, chan, value, depth))

    def _receives(self, env, term, chan, value, depth):
        # only reached when the configuration can start receiving on chan
        match term:
            case Recv(c, body, _, x) if c == chan:
                return frozenset({ActiveRecv(c, body, x)})
            case Sum(a, b):
                out = frozenset()
                if isrcv_term(a, chan, depth):
                    out |= self.receives(env, a, chan, value, depth)
                if isrcv_term(b, chan, depth):
                    out |= self.receives(env, b, chan, value, depth)
                return out
            case Fix():
                return self.receives(env, unfold(term), chan, value, depth)
            case Par(a, b):
                return frozenset(Par(a2, b2)
                                 for a2 in self.receives(env, a, chan, value, depth)
                                 for b2 in self.receives(env, b, chan, value, depth))
            case Restrict(n, v0, body, hint):
                inner = self._inner_env(env, term, depth)
                return frozenset(Restrict(n, v0, w, hint)
                                 for w in self.receives(inner, body, chan, value, depth + 1))
        raise AssertionError(f"no reception rule for {term}")

    # -- internal moves

    def taus(self, env: ChannelEnv, term: Term, depth: int = 0):
        return self._cached(("tau", env, term, depth), lambda: self._taus(env, term, depth))

    def _taus(self, env, term, depth):
        match term:
            case Tau(k):
                return frozenset({k})
            case Recv(c, body, _, x) if env.is_exposed(c):
                late = instantiate(body, self.alphabet.err, keep_binder=True)
                return frozenset({ActiveRecv(c, late, x)})
            case Match(cond, a, b):
                return frozenset({Delay(a if self.eval_bool(cond, env) else b)})
            case Sum(a, b):
                return self.taus(env, a, depth) | self.taus(env, b, depth)
            case Fix():
                return self.taus(env, unfold(term), depth)
            case Par(a, b):
                return (frozenset(Par(a2, b) for a2 in self.taus(env, a, depth))
                        | frozenset(Par(a, b2) for b2 in self.taus(env, b, depth)))
            case Restrict(n, v0, body, hint):
                name = bound_channel(depth)
                inner = self._inner_env(env, term, depth)
                out = {Restrict(n, v0, w, hint) for w in self.taus(inner, body, depth + 1)}
                for c, v, w in self.sends(inner, body, depth + 1):
                    if c == name:
                        t2, v2 = upd(inner, Out(c, v), self.alphabet).exposure(name)
                        out.add(Restrict(t2, v2, w, hint))
                return frozenset(out)
        return frozenset()

    # -- passage of time

    def sigmas(self, env: ChannelEnv, term: Term, depth: int = 0):
        return self._cached(("sigma", env, term, depth), lambda: self._sigmas(env, term, depth))

    def _sigmas(self, env, term, depth):
        match term:
            case Nil():
                return frozenset({term})
            case Delay(k):
                return frozenset({k})
            case ActiveRecv(c, body):
                t, v = env.exposure(c)
                if t > 1:
                    return frozenset({term})
                if t == 1:
                    return frozenset({instantiate(body, v)})
                return frozenset()
            case Recv(c, _, timeout) if env.is_idle(c):
                return frozenset({timeout})
            case Sum(a, b):
                return frozenset(Sum(a2, b2) for a2 in self.sigmas(env, a, depth)
                                 for b2 in self.sigmas(env, b, depth))
            case Fix():
                return self.sigmas(env, unfold(term), depth)
            case Par(a, b):
                return frozenset(Par(a2, b2) for a2 in self.sigmas(env, a, depth)
                                 for b2 in self.sigmas(env, b, depth))
            case Restrict(n, v0, body, hint):
                inner = self._inner_env(env, term, depth)
                t2, v2 = (n - 1, v0) if n > 1 else (0, None)
                return frozenset(Restrict(t2, v2, w, hint)
                                 for w in self.sigmas(inner, body, depth + 1))
        return frozenset()

    # -- all transitions of a configuration

    def input_channels(self, conf: Configuration, declared=()) -> frozenset[str]:
        return frozenset(declared) | free_channels(conf.term) | conf.env.exposed()

    def next(self, conf: Configuration, channels=None) -> frozenset[Step]:
        """Every labelled transition ``<env, W> -λ-> W'``.

        Receptions are enumerated for each channel in ``channels`` (default:
        the free and exposed channels) and each value of the alphabet.
        """
        env, term = conf.env, conf.term
        if channels is None:
            channels = self.input_channels(conf)
        out = {Step(Out(c, v), w) for c, v, w in self.sends(env, term)}
        out |= {Step(TAU, w) for w in self.taus(env, term)}
        out |= {Step(SIGMA, w) for w in self.sigmas(env, term)}
        for c in sorted(channels):
            for v in self.alphabet.values:
                out |= {Step(In(c, v), w) for w in self.receives(env, term, c, v)}
        return frozenset(out)

    def decompose(self, env: ChannelEnv, term: Par, label: Label,
                  depth: int = 0) -> list[Decomposition]:
        """Component moves that justify transitions of ``W1 | W2`` under ``label``."""
        a, b = term.left, term.right
        out: list[Decomposition] = []
        match label:
            case Out(c, v):
                for c1, v1, a2 in self.sends(env, a, depth):
                    if (c1, v1) == (c, v):
                        for b2 in self.receives(env, b, c, v, depth):
                            out.append(Decomposition(label, a2, In(c, v), b2))
                for c1, v1, b2 in self.sends(env, b, depth):
                    if (c1, v1) == (c, v):
                        for a2 in self.receives(env, a, c, v, depth):
                            out.append(Decomposition(In(c, v), a2, label, b2))
            case In(c, v):
                for a2 in self.receives(env, a, c, v, depth):
                    for b2 in self.receives(env, b, c, v, depth):
                        out.append(Decomposition(label, a2, label, b2))
            case TauLabel():
                out += [Decomposition(TAU, a2, None, b) for a2 in self.taus(env, a, depth)]
                out += [Decomposition(None, a, TAU, b2) for b2 in self.taus(env, b, depth)]
            case Sigma():
                for a2 in self.sigmas(env, a, depth):
                    for b2 in self.sigmas(env, b, depth):
                        out.append(Decomposition(SIGMA, a2, SIGMA, b2))
        return out
