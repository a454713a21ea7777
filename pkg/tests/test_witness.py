import pytest

from cccp.bisim import bisimilar, check_witness, reachable_pairs
from cccp.corpus import load_example
from cccp.extensional import build_lts
from cccp.intensional import Semantics

from tables import EQUATORS, MERGING, relation


def table_relation(name, rows):
    c1, a = load_example(f"{name}_L")
    c2, _ = load_example(f"{name}_R")
    sem = Semantics(a)
    lts1, lts2 = build_lts(c1, sem, ["c"]), build_lts(c2, sem, ["c"])
    return lts1, lts2, relation(rows, a, lts1, lts2)


TABLES = {"equators": EQUATORS, "merging": MERGING}


@pytest.mark.parametrize("name", TABLES)
def test_table_is_a_bisimulation(name):
    lts1, lts2, rel = table_relation(name, TABLES[name])
    assert (0, 0) in rel
    assert check_witness(lts1, lts2, rel) is None


@pytest.mark.parametrize("name, sizes, pairs, reachable", [
    ("equators", (22, 21), 22, 22),
    ("merging", (31, 31), 36, 34),
])
def test_table_sizes(name, sizes, pairs, reachable):
    lts1, lts2, rel = table_relation(name, TABLES[name])
    assert (len(lts1), len(lts2)) == sizes
    assert len(rel) == pairs
    assert len(reachable_pairs(lts1, lts2, rel)) == reachable


@pytest.mark.parametrize("name", TABLES)
def test_table_is_inside_the_computed_witness(name):
    lts1, lts2, rel = table_relation(name, TABLES[name])
    verdict = bisimilar(lts1.states[0], lts2.states[0], Semantics(load_example(f"{name}_L")[1]),
                        ["c"])
    assert verdict.bisimilar
    assert rel <= verdict.witness


@pytest.mark.parametrize("name", TABLES)
def test_removing_a_pair_on_the_path_breaks_the_table(name):
    lts1, lts2, rel = table_relation(name, TABLES[name])
    path = reachable_pairs(lts1, lts2, rel)
    for pair in sorted(path):
        assert check_witness(lts1, lts2, rel - {pair}) is not None, pair


@pytest.mark.parametrize("name", TABLES)
def test_every_row_is_used(name):
    rows = TABLES[name]
    lts1, lts2, full = table_relation(name, rows)
    for i in range(len(rows)):
        _, _, without = table_relation(name, rows[:i] + rows[i + 1:])
        assert without < full, rows[i][:2]
