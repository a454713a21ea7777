"""Detection by testing contexts against weak edges of the extensional LTS."""

from __future__ import annotations

from cccp.extensional import StateBudgetExceeded, build_lts, default_channels, weak_closure
from cccp.harness import applicable_actions, detect, with_probes
from cccp.intensional import Semantics
from cccp.reduction import Tristate

from termgen import Sample


def compare(s: Sample, max_states: int = 2000, budget: int = 200_000):
    """Per-action (detected, weak edge) pairs, or None if the LTS is too big."""
    sem = Semantics(s.alphabet)
    chans = default_channels([s.conf], s.channels)
    try:
        lts = build_lts(s.conf, sem, chans, max_states)
    except StateBudgetExceeded:
        return None
    weak = weak_closure(lts)[lts.root]
    probe = Semantics(with_probes(s.alphabet))
    out = {}
    for action in applicable_actions(s.conf, s.alphabet, chans):
        found = detect(s.conf, action, probe, budget)
        if found is Tristate.INDETERMINATE:
            return None
        out[action] = (found is Tristate.TRUE, bool(weak.get(action)))
    return out
