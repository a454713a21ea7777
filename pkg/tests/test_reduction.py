from hypothesis import given, settings

from cccp.channelenv import STABLE, ChannelEnv, Configuration
from cccp.corpus import load_example
from cccp.harness import EUREKA, tdma_alphabet, tdma_examples, with_probes
from cccp.intensional import Semantics
from cccp.labels import SIGMA, TAU, Out
from cccp.reduction import (
    INSTANT, TIMED, Reduction, Tristate, format_trace, instantaneous, instantaneous_bound,
    reductions, strong_barb, timed, trace, weak_barb, well_formed,
)
from cccp.syntax import Alphabet, parse_term

from termgen import configurations

A = Alphabet({"v": 1, "w": 1, "v0": 2})
SEM = Semantics(A)


def conf(text, **entries):
    return Configuration(ChannelEnv.of(entries), parse_term(text, A, allow_reserved=True))


def run_deterministic(c, sem, steps):
    """Follow a chain in which every configuration has exactly one reduction."""
    out = []
    for _ in range(steps):
        (r,) = reductions(c, sem)
        out.append((r.kind, str(r.label), r.target.env.as_dict()))
        c = r.target
    return out, c


def test_collision_chain():
    c, a = load_example("collision")
    chain, end = run_deterministic(c, Semantics(a), 4)
    assert chain == [
        (INSTANT, "c!v0", {"c": (2, "v0")}),
        (TIMED, "sigma", {"c": (1, "v0")}),
        (INSTANT, "c!v1", {"c": (1, "err")}),
        (TIMED, "sigma", {}),
    ]
    assert end.term == parse_term("nil | nil | d!<err>", a)


def test_collision_chain_with_long_second_transmission():
    c, a = load_example("collision_long")
    chain, _ = run_deterministic(c, Semantics(a), 5)
    assert [env for _, _, env in chain] == [
        {"c": (2, "v0")}, {"c": (1, "v0")}, {"c": (2, "err")}, {"c": (1, "err")}, {},
    ]


def test_nil_only_lets_time_pass():
    assert reductions(conf("nil"), SEM) == [Reduction(TIMED, SIGMA, conf("nil"))]


def test_tau():
    assert reductions(conf("tau.c!<v>"), SEM) == [Reduction(INSTANT, TAU, conf("c!<v>"))]


def test_send_updates_environment():
    (r,) = reductions(conf("c!<v0>"), SEM)
    assert r == Reduction(INSTANT, Out("c", "v0"), conf("sigma^2", c=(2, "v0")))
    assert instantaneous(conf("c!<v0>"), SEM) == [r.target]
    assert timed(conf("c!<v0>"), SEM) == []


def test_barbs():
    assert strong_barb(conf("nil", c=(1, "v")), "c")
    assert not strong_barb(conf("c!<v>"), "c")
    assert weak_barb(conf("c!<v>"), "c", SEM) == Tristate.TRUE
    assert weak_barb(conf("sigma^3.c!<v>"), "c", SEM) == Tristate.TRUE
    assert weak_barb(conf("c?(x).nil else nil"), "c", SEM) == Tristate.FALSE


def test_weak_barb_budget():
    c = conf("sigma^5.c!<v>")
    assert weak_barb(c, "c", SEM, budget=3) == Tristate.INDETERMINATE
    assert weak_barb(c, "c", SEM, budget=100) == Tristate.TRUE


def test_passage_of_time_is_observable():
    a = with_probes(A)
    sem = Semantics(a)
    test = f"[exp(c)] {EUREKA}!<_ok> else nil"
    q1 = Configuration(STABLE, parse_term(f"c!<v0> | {test}", a, allow_reserved=True))
    q2 = Configuration(STABLE, parse_term(f"sigma.c!<v0> | {test}", a, allow_reserved=True))
    assert weak_barb(q1, EUREKA, sem) == Tristate.TRUE
    assert weak_barb(q2, EUREKA, sem) == Tristate.FALSE
    # the only reduction of the second evaluates the test too early
    (r,) = reductions(q2, sem)
    assert r.target == Configuration(STABLE, parse_term("sigma.c!<v0> | sigma", a))


def test_well_formed():
    assert well_formed(conf("c?[x].d!<x>", c=(1, "v")))
    assert not well_formed(conf("c?[x].d!<x>"))
    assert not well_formed(conf("new d:(0, -).d?[x].nil"))
    assert well_formed(conf("new d:(1, v).d?[x].nil"))
    assert well_formed(conf("fix X. c?(x).X else sigma.X"))


def test_corpus_ill_formed_examples():
    for name in ("illformed_1", "illformed_2"):
        c, _ = load_example(name)
        assert not well_formed(c), name


def test_instantaneous_bound():
    assert instantaneous_bound(conf("nil"), SEM) == 0
    assert instantaneous_bound(conf("tau.tau.nil"), SEM) == 2
    assert instantaneous_bound(conf("tau.c!<v> | tau.d!<v>"), SEM) == 4
    assert instantaneous_bound(conf("c!<v> + tau.tau"), SEM) == 2
    a = tdma_alphabet()
    examples = tdma_examples(a)
    assert instantaneous_bound(Configuration(STABLE, examples["tdma"]), Semantics(a)) == 1
    assert instantaneous_bound(Configuration(STABLE, examples["routing"]), Semantics(a)) == 0


def test_trace_depth_zero():
    root = trace(conf("c!<v>"), SEM, 0)
    assert root.children == []
    assert format_trace(root) == "0: {} |- c!<v>\n"


def test_tdma_schedule():
    a = tdma_alphabet()
    c = Configuration(STABLE, tdma_examples(a)["tdma"])
    text = format_trace(trace(c, Semantics(a), 8))
    edges = [line for line in text.splitlines() if "->" in line]
    assert edges == [
        "0 -inst:tau-> 1", "1 -timed:sigma-> 2", "2 -inst:tau-> 3", "3 -timed:sigma-> 4",
        "4 -inst:tau-> 5", "5 -timed:sigma-> 6", "6 -inst:tau-> 7", "7 -timed:sigma-> 8",
    ]
    assert "8: {} |- new d:(0, -).(nil | nil | c!<compose(v00, v01)> | " \
        "sigma^2.c!<compose(v10, v11)>)" in text


@settings(max_examples=300)
@given(configurations())
def test_exposure_grows_along_instantaneous_reductions(sample):
    sem = Semantics(sample.alphabet)
    for r in reductions(sample.conf, sem):
        if r.kind == INSTANT:
            assert sample.conf.env.leq(r.target.env)
        else:
            assert r.label == SIGMA


@settings(max_examples=200)
@given(configurations(depth=4))
def test_instantaneous_bound_is_finite_for_guarded_terms(sample):
    assert instantaneous_bound(sample.conf, Semantics(sample.alphabet), 20_000) is not None
