import pytest
from hypothesis import given, settings

from cccp.channelenv import ChannelEnv, Configuration
from cccp.corpus import load_example
from cccp.extensional import (
    INTERNAL, TIME, Deliver, Idle, Input, StateBudgetExceeded, build_lts, default_channels,
    ext_next, format_lts, weak_closure,
)
from cccp.intensional import Semantics
from cccp.reduction import INSTANT, reductions
from cccp.syntax import Alphabet, parse_term

from termgen import configurations

A = Alphabet({"v": 1, "w": 1, "v0": 2})
SEM = Semantics(A)


def conf(text, **entries):
    return Configuration(ChannelEnv.of(entries), parse_term(text, A))


def labels(c, channels=("c",)):
    return sorted({str(a) for a, _ in ext_next(c, channels, SEM)})


def test_nil_on_stable_channel():
    c = conf("nil")
    assert labels(c) == ["c?err", "c?v", "c?v0", "c?w", "iota(c)", "sigma"]
    assert all(t == c for a, t in ext_next(c, ["c"], SEM) if not isinstance(a, Input))
    # inputs expose c; a second input during v0 collides into (2, err)
    envs = {s.env.exposure("c") for s in build_lts(c, SEM, ["c"]).states}
    assert envs == {(0, None), (1, "v"), (1, "w"), (1, "err"), (2, "v0"), (1, "v0"), (2, "err")}


def test_input_updates_environment():
    moves = dict(ext_next(conf("nil"), ["c"], SEM))
    assert moves[Input("c", "v0")] == conf("nil", c=(2, "v0"))


def test_send_is_internal():
    assert ext_next(conf("c!<v>"), [], SEM) == [(INTERNAL, conf("sigma", c=(1, "v")))]


def test_deliver_accompanies_the_last_slot():
    c = conf("nil", c=(1, "v"))
    moves = ext_next(c, ["c"], SEM)
    assert (Deliver("c", "v"), conf("nil")) in moves
    assert (TIME, conf("nil")) in moves
    assert not any(isinstance(a, Idle) for a, _ in moves)
    # no delivery while more than one slot remains
    assert not any(isinstance(a, Deliver) for a, _ in ext_next(conf("nil", c=(2, "v0")), ["c"], SEM))


def test_deliver_needs_time_to_pass():
    # an enabled send blocks sigma and with it the delivery
    c = conf("d!<v>", c=(1, "v"))
    assert not any(isinstance(a, Deliver) for a, _ in ext_next(c, ["c", "d"], SEM))


def test_default_channels():
    c = conf("new d:(0, -).(d!<v> | e!<w>)", c=(1, "v"))
    assert default_channels([c]) == {"c", "e"}
    assert default_channels([c], ["f"]) == {"c", "e", "f"}


def test_transmit_lts_sizes():
    c, a = load_example("transmit_L")
    lts = build_lts(c, Semantics(a), ["c", "d"])
    assert lts.root == 0 and lts.states[0] == c


def test_equators_sizes():
    sem = None
    sizes = []
    for name in ("equators_L", "equators_R"):
        c, a = load_example(name)
        sem = sem or Semantics(a)
        sizes.append(len(build_lts(c, sem, ["c"])))
    assert sizes == [22, 21]


def test_budget():
    c, a = load_example("equators_L")
    with pytest.raises(StateBudgetExceeded) as exc:
        build_lts(c, Semantics(a), ["c"], max_states=5)
    assert exc.value.limit == 5


def test_format_lts():
    text = format_lts(build_lts(conf("c!<v>"), SEM, []))
    assert text == "0: {} |- c!<v>\n1: {c=(1,v)} |- sigma\n2: {} |- nil\n" \
                   "0 -tau-> 1\n1 -sigma-> 2\n1 -gamma(c,v)-> 2\n2 -sigma-> 2\n"


def test_weak_closure():
    lts = build_lts(conf("tau.tau.c!<v>"), SEM, [])
    weak = weak_closure(lts)
    assert len(weak[0][INTERNAL]) == 4
    assert weak[0][TIME] == weak[3][TIME]


@settings(max_examples=300)
@given(configurations())
def test_internal_and_time_edges_are_reductions(sample):
    c, sem = sample.conf, Semantics(sample.alphabet)
    ext = {(a, t) for a, t in ext_next(c, sample.channels, sem) if a in (INTERNAL, TIME)}
    red = {(INTERNAL if r.kind == INSTANT else TIME, r.target) for r in reductions(c, sem)}
    assert ext == red


@settings(max_examples=300)
@given(configurations())
def test_idle_iff_channel_idle(sample):
    c, sem = sample.conf, Semantics(sample.alphabet)
    moves = ext_next(c, sample.channels, sem)
    for ch in sample.channels:
        assert ((Idle(ch), c) in moves) == c.env.is_idle(ch)
    for a, t in moves:
        if isinstance(a, Deliver):
            assert c.env.exposure(a.chan) == (1, a.value)
            assert (TIME, t) in moves


@settings(max_examples=100)
@given(configurations(depth=4))
def test_weak_idle_means_idle(sample):
    # internal steps only ever expose channels, so a weak iota needs a strong one
    sem = Semantics(sample.alphabet)
    try:
        lts = build_lts(sample.conf, sem, sample.channels, max_states=3000)
    except StateBudgetExceeded:
        return
    weak = weak_closure(lts)
    for s, state in enumerate(lts.states):
        for ch in sample.channels:
            if Idle(ch) in weak[s] and state.env.is_exposed(ch):
                pytest.fail(f"state {s} is exposed on {ch} but weakly idle")


def test_stable_nil_without_channels():
    assert build_lts(conf("nil"), SEM, []).edges == [[(TIME, 0)]]
