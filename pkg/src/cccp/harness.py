"""Testing contexts for extensional actions, and example builders.

Each test ``T`` for an action detects it by reaching ``W' | T_ok`` through
reductions of ``W | T``.  Tests use the reserved channels ``_eureka`` and
``_fail`` and the reserved values ``_ok`` and ``_no`` (both of length 1), so
they can never clash with user names.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .channelenv import STABLE, ChannelEnv, Configuration
from .extensional import (
    Deliver, ExtAction, Idle, Input, build_lts, default_channels, weak_closure,
)
from .intensional import Semantics
from .reduction import INSTANT, TIMED, Tristate, reductions, weak_barb
from .syntax import Alphabet, Par, Term, fsn, free_channels, parse_term

EUREKA = "_eureka"
FAIL = "_fail"
OK = "_ok"
NO = "_no"


def with_probes(alphabet: Alphabet) -> Alphabet:
    """The alphabet extended with the probe values used by tests."""
    return alphabet.extended({OK: 1, NO: 1})


def _parse(text: str, alphabet: Alphabet) -> Term:
    return parse_term(text, alphabet, allow_reserved=True)


@dataclass(frozen=True)
class TestContext:
    action: ExtAction
    tester: Term
    success: Term


def make_test(action: ExtAction, alphabet: Alphabet) -> TestContext:
    """The test and its success residual for ``action``.

    ``alphabet`` must already contain the probe values (see ``with_probes``).
    """
    match action:
        case Input(c, v):
            d = alphabet.delta(v)
            tester = f"{c}!<{v}>.{EUREKA}!<{OK}> + {FAIL}!<{NO}>"
            success = f"sigma^{d}.{EUREKA}!<{OK}>"
        case Deliver(c, v):
            tester = (f"new _d:(0, -).({c}?[_x].(([_x = {v}] _d!<{OK}> else nil)"
                      f" + {FAIL}!<{NO}>) | sigma^2.[exp(_d)] {EUREKA}!<{OK}> else nil)")
            success = (f"new _d:(0, -).(sigma.{'_d'}!<{OK}> | sigma.[exp(_d)] "
                       f"{EUREKA}!<{OK}> else nil)")
        case Idle(c):
            tester = f"([exp({c})] nil else {EUREKA}!<{OK}>) + {FAIL}!<{NO}>"
            success = f"sigma.{EUREKA}!<{OK}>"
        case _:
            raise ValueError(f"no test for action {action}")
    return TestContext(action, _parse(tester, alphabet), _parse(success, alphabet))


def detect_targets(conf: Configuration, action: ExtAction, sem: Semantics,
                   budget: int = 100_000) -> set[Configuration] | None:
    """Configurations ``<env', W'>`` reached with the test in its success state.

    Inputs and idleness are detected by instantaneous reductions only;
    deliveries by instantaneous reductions, one timed step, and instantaneous
    reductions again.  Returns None if ``budget`` states were not enough.
    """
    test = make_test(action, sem.alphabet)
    start = Configuration(conf.env, Par(conf.term, test.tester))
    timed_phase = isinstance(action, Deliver)
    seen = {(start, 0)}
    queue = deque(seen)
    found = set()
    while queue:
        cur, phase = queue.popleft()
        final_phase = 1 if timed_phase else 0
        if phase == final_phase and isinstance(cur.term, Par) and cur.term.right == test.success:
            found.add(Configuration(cur.env, cur.term.left))
        for r in reductions(cur, sem):
            if r.kind == INSTANT:
                nxt = (r.target, phase)
            elif r.kind == TIMED and timed_phase and phase == 0:
                nxt = (r.target, 1)
            else:
                continue
            if nxt not in seen:
                if len(seen) >= budget:
                    return None
                seen.add(nxt)
                queue.append(nxt)
    return found


def detect(conf: Configuration, action: ExtAction, sem: Semantics,
           budget: int = 100_000) -> Tristate:
    found = detect_targets(conf, action, sem, budget)
    if found is None:
        return Tristate.INDETERMINATE
    return Tristate.TRUE if found else Tristate.FALSE


def weak_targets(conf: Configuration, action: ExtAction, sem: Semantics,
                 channels: Iterable[str] = (), max_states: int = 100_000) -> set[Configuration]:
    """``{C' | conf =action=> C'}`` read off the extensional LTS."""
    lts = build_lts(conf, sem, default_channels([conf], channels), max_states)
    weak = weak_closure(lts)
    return {lts.states[t] for t in weak[0].get(action, ())}


def applicable_actions(conf: Configuration, alphabet: Alphabet,
                       channels: Iterable[str] = ()) -> list[ExtAction]:
    """Actions that have a test: inputs, idleness, and deliveries on exposed channels."""
    chans = sorted(set(channels) | free_channels(conf.term) | conf.env.exposed())
    out: list[ExtAction] = []
    user_values = [v for v in alphabet.values if not v.startswith("_")]
    for c in chans:
        out += [Input(c, v) for v in user_values]
        out.append(Idle(c))
        if conf.env.is_exposed(c):
            out += [Deliver(c, v) for v in user_values]
    return out


def default_contexts(confs: Iterable[Configuration], alphabet: Alphabet,
                     channels: Iterable[str] = ()) -> list[Term]:
    """Tests for every applicable action, plus one listener per channel and value.

    ``alphabet`` must already contain the probe values.
    """
    actions: list[ExtAction] = []
    chans: set[str] = set(channels)
    for conf in confs:
        chans |= free_channels(conf.term) | conf.env.exposed()
        actions += [a for a in applicable_actions(conf, alphabet, channels) if a not in actions]
    out = [make_test(a, alphabet).tester for a in actions]
    user_values = [v for v in alphabet.values if not v.startswith("_")]
    for c in sorted(chans):
        for v in user_values:
            out.append(_parse(f"{c}?(_x).[_x = {v}] {EUREKA}!<{OK}> else nil", alphabet))
    return out


@dataclass(frozen=True)
class ProbeResult:
    distinguished: bool
    context: Term | None = None
    barb: str | None = None
    indeterminate: int = 0


def congruence_probe(c1: Configuration, c2: Configuration, contexts: Iterable[Term],
                     barbs: Iterable[str], sem: Semantics, budget: int = 10_000) -> ProbeResult:
    """Search for a parallel context separating the two configurations by a weak barb."""
    skipped = 0
    barbs = sorted(barbs)
    for ctx in contexts:
        for c in barbs:
            b1 = weak_barb(Configuration(c1.env, Par(c1.term, ctx)), c, sem, budget)
            b2 = weak_barb(Configuration(c2.env, Par(c2.term, ctx)), c, sem, budget)
            if Tristate.INDETERMINATE in (b1, b2):
                skipped += 1
            elif b1 != b2:
                return ProbeResult(True, ctx, c, skipped)
    return ProbeResult(False, None, None, skipped)


# -- example builders ---------------------------------------------------------


def persistent_sender(chan: str, value: str, alphabet: Alphabet) -> Term:
    return parse_term(f"fix X. {chan}!<{value}>.X", alphabet)


def noise(chan: str, value: str, alphabet: Alphabet) -> Term:
    """Two staggered persistent senders that keep ``chan`` exposed."""
    return parse_term(f"fix X. {chan}!<{value}>.X | sigma.fix X. {chan}!<{value}>.X", alphabet)


def csma(chan: str, value: str, cont: str, alphabet: Alphabet) -> Term:
    """Channel-sensing broadcast: wait while ``chan`` is exposed, then send."""
    return parse_term(f"fix X. [exp({chan})] X else {chan}!<{value}>.{cont}", alphabet)


def equator(alphabet: Alphabet, v0: str, v1: str, arb: str, h: int, chan: str = "c"):
    """Collision pair hiding the difference between ``v0`` and ``v1``.

    Returns the configurations ``c!<v0> | sigma^h.c!<arb>`` and
    ``c!<v1> | sigma^h.c!<arb>`` in the stable environment.
    """
    d0, d1, da = alphabet.delta(v0), alphabet.delta(v1), alphabet.delta(arb)
    if not 0 <= h < min(d0, d1):
        raise ValueError("equator needs 0 <= h < min(delta v0, delta v1)")
    if da < max(d0, d1) - h:
        raise ValueError("equator needs delta arb >= max(delta v0, delta v1) - h")
    pre = f"sigma^{h}." if h else ""
    mk = lambda v: Configuration(STABLE, parse_term(  # noqa: E731
        f"{chan}!<{v}> | {pre}{chan}!<{arb}>", alphabet))
    return mk(v0), mk(v1)


def merger(alphabet: Alphabet, v0: str, v1: str, arb: str, chan: str = "c"):
    """Collision pair hiding the order of two consecutive broadcasts."""
    d0, d1, da = alphabet.delta(v0), alphabet.delta(v1), alphabet.delta(arb)
    h = min(d0, d1) - 1
    if da != abs(d0 - d1) + 2:
        raise ValueError("merger needs delta arb = |delta v0 - delta v1| + 2")
    pre = f"sigma^{h}." if h else ""
    mk = lambda a, b: Configuration(STABLE, parse_term(  # noqa: E731
        f"{chan}!<{a}>.{chan}!<{b}> | {pre}{chan}!<{arb}>", alphabet))
    return mk(v0, v1), mk(v1, v0)


def topology_examples(alphabet: Alphabet, value: str = "v", chan: str = "c") -> dict[str, Term]:
    """Networks with a hidden relay, with their sequential specifications."""
    d = alphabet.delta(value)
    relay = f"fix X. d?(x).{chan}!<x> else X"
    return {
        "C0": parse_term(f"new d:(0, -).(d!<{value}> | {relay})", alphabet),
        "S0": parse_term(f"sigma^{d}.{chan}!<{value}>", alphabet),
        "C1": parse_term(f"new d:(0, -).(d!<{value}> | (d!<{value}> + tau.nil) | {relay})",
                         alphabet),
        "S1": parse_term(f"tau.sigma.{chan}!<{value}> + tau.sigma.{chan}!<{alphabet.err}>",
                         alphabet),
    }


def tdma_alphabet() -> Alphabet:
    deltas = {"v0": 2, "v1": 2, "v00": 1, "v01": 1, "v10": 1, "v11": 1, "err": 2}
    table = {("v00", "v01"): "v0", ("v10", "v11"): "v1"}
    return Alphabet(deltas, table)


def tdma_examples(alphabet: Alphabet | None = None) -> dict[str, Term]:
    """Split-packet and routing networks delivering ``v0`` then ``v1`` on ``c``."""
    a = alphabet or tdma_alphabet()
    s0 = "d!<v00>.sigma.d!<v01>"
    s1 = "sigma.d!<v10>.sigma.d!<v11>"
    r0 = "d?(x).sigma.d?(y).sigma.c!<compose(x, y)>"
    r1 = "sigma.d?(x).sigma.d?(y).sigma^2.c!<compose(x, y)>"
    s0c = f"({s0}) + tau.sigma.{s0}"
    s1c = "(d!<v10>.sigma.d!<v11>) + tau.sigma.d!<v10>.sigma.d!<v11>"
    route0 = "tau.sigma^4.c!<v0> + tau.sigma^4.d!<v0>"
    route1 = "tau.sigma^4.c!<v1> + tau.sigma^4.d!<v1>"
    relay = "d?*(x).c!<x>"
    return {
        "spec": parse_term("sigma^4.c!<v0>.c!<v1>", a),
        "tdma": parse_term(f"new d:(0, -).({s0} | {s1} | {r0} | {r1})", a),
        "routing": parse_term(f"new d:(0, -).(sigma^4.c!<v0> | sigma^4.d!<v1> | {relay})", a),
        "tdma_collide": parse_term(f"new d:(0, -).({s0c} | {s1c} | {r0} | {r1})", a),
        "routing_collide": parse_term(f"new d:(0, -).({route0} | {route1} | {relay})", a),
        "spec_collide": parse_term(
            "tau.sigma^4.c!<v0>.c!<v1> + tau.sigma^4.c!<v1>.c!<v0>"
            " + tau.sigma^4.c!<err> + tau.sigma^6.c!<err>", a),
    }


def unobservable(term: Term) -> bool:
    """True when ``term`` can never broadcast on a free channel."""
    return not fsn(term)


__all__ = [
    "EUREKA", "FAIL", "OK", "NO", "ChannelEnv", "TestContext", "ProbeResult",
    "with_probes", "make_test", "detect", "detect_targets", "weak_targets",
    "applicable_actions", "congruence_probe", "persistent_sender", "noise", "csma",
    "equator", "merger", "topology_examples", "tdma_alphabet", "tdma_examples",
    "unobservable",
]
