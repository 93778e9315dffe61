import pytest
from hypothesis import given, strategies as st

from condorcet_sim.attack import (
    AttackPlan,
    clone_plan,
    four_tx_plan,
    make_plan,
    pause_window,
    reversal_adversary_count,
    reverse_orderings,
    schedule,
    two_tx_plan,
)
from condorcet_sim.model import LocalOrdering, Partition


def test_two_tx_example_plan():
    p = two_tx_plan(3, 10.0)
    assert p.partition.sizes() == [1, 1, 1]
    assert p.init == (("A", "B"), ("B",), ())
    assert p.finalize == ((), ("A",), ("A", "B"))


@pytest.mark.parametrize("n,sizes", [(21, [7, 7, 7]), (4, [2, 1, 1])])
def test_two_tx_sizes(n, sizes):
    assert two_tx_plan(n, 10.0).partition.sizes() == sizes


def test_four_tx_pattern():
    p = four_tx_plan(4, 10.0)
    assert p.init == (("A", "B"), ("B", "C"), ("C", "D"), ("D", "A"))
    assert p.finalize == (("C", "D"), ("D", "A"), ("A", "B"), ("B", "C"))


@pytest.mark.parametrize("n,sizes", [(21, [6, 5, 5, 5]), (101, [26, 25, 25, 25])])
def test_four_tx_sizes(n, sizes):
    assert four_tx_plan(n, 10.0).partition.sizes() == sizes


def test_too_few_nodes():
    with pytest.raises(ValueError):
        two_tx_plan(2, 10.0)
    with pytest.raises(ValueError):
        four_tx_plan(3, 10.0)


def test_pause_must_be_positive():
    with pytest.raises(ValueError):
        two_tx_plan(3, 0.0)


def test_clone_listing():
    c = clone_plan(two_tx_plan(3, 10.0), 2)
    assert c.init == (("A1", "A2", "B1", "B2"), ("B1", "B2"), ())
    assert c.finalize == ((), ("A1", "A2"), ("A1", "A2", "B1", "B2"))
    assert c.clone_group("B2") == "B"


def test_clone_identity():
    p = two_tx_plan(3, 10.0)
    assert clone_plan(p, 1) == p


def test_clone_four_tx_doubles_in_place():
    c = clone_plan(four_tx_plan(4, 10.0), 2)
    assert c.init[3] == ("D1", "D2", "A1", "A2")
    assert c.finalize[0] == ("C1", "C2", "D1", "D2")


def test_schedule_expansion():
    p = two_tx_plan(3, 10.0)
    got = [(round(s.time, 9), s.part, s.tx) for s in schedule(p, 0.0, 0.01)]
    assert got == [(0.0, 0, "A"), (0.0, 1, "B"), (0.01, 0, "B"),
                   (10.0, 1, "A"), (10.0, 2, "A"), (10.01, 2, "B")]
    assert not [s for s in schedule(p) if s.part == 2 and s.phase == "init"]


def test_schedule_with_clones_doubles():
    p = two_tx_plan(3, 10.0)
    c = clone_plan(p, 2)
    sched = schedule(c)
    assert len(sched) == 2 * len(schedule(p))
    assert [s.tx for s in sched if s.part == 0] == ["A1", "A2", "B1", "B2"]


def test_pause_window():
    assert pause_window(two_tx_plan(3, 10.0)) == pytest.approx((0.01, 10.0))


def test_reverse_orderings():
    ords = [LocalOrdering(0, ["x", "y", "z"]), LocalOrdering(1, ["x", "y", "z"])]
    out = reverse_orderings(ords, {0})
    assert list(out[0].sequence) == ["z", "y", "x"]
    assert list(out[1].sequence) == ["x", "y", "z"]
    assert reverse_orderings(ords, set()) == ords


def test_reversal_count():
    assert reversal_adversary_count(21) == 4
    assert reversal_adversary_count(3) == 0


def test_plan_rejects_repeat_within_part():
    with pytest.raises(ValueError):
        AttackPlan(Partition.even(3, 3), (("A", "A"), (), ()), ((), (), ()), 1.0)


@given(st.sampled_from(["two_tx", "four_tx"]), st.integers(4, 120), st.integers(1, 4),
       st.floats(0.1, 100))
def test_each_node_sends_each_tx_at_most_once(kind, n, k, pause):
    p = make_plan(kind, n, pause, k)
    for init, fin in zip(p.init, p.finalize):
        seq = list(init) + list(fin)
        assert len(seq) == len(set(seq))
    assert schedule(p) == schedule(p)
    assert len(schedule(p)) == sum(len(s) for s in p.init) + sum(len(s) for s in p.finalize)
