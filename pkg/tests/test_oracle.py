import random

import pytest

from mfotl_monitor.formula import And, Const, Eq, Interval, Neg, Pred, Release, Trigger, Var
from mfotl_monitor.oracle import (
    Fresh,
    Oracle,
    UndeterminedTimePoint,
    UnsafeFormula,
    dfv,
    down_cl_ivl,
    eval_trm,
    sat,
    sats_table,
    up_cl_ivl,
)
from mfotl_monitor.table import unit_table
from mfotl_monitor.trace import TracePrefix

from cases import BEST, PIRACY_TRACE, PIRATED, QUALITY_TRACE, prefix
from randgen import random_safe, random_trace, prefix_of
from suites import coincidence, duality

x = Var(0)
TOP = Eq(Const("a"), Const("a"))


def unit_stamps(k):
    return prefix([(frozenset(), t) for t in range(k)])


def test_eval_trm():
    assert eval_trm((7,), Const(3)) == 3
    assert eval_trm((7,), Var(0)) == 7
    assert eval_trm((7, 9), Var(1)) == 9


class TestWindows:
    def test_down_closure(self):
        assert down_cl_ivl(unit_stamps(5), Interval(0, 2), 3) == {1, 2, 3}
        assert down_cl_ivl(unit_stamps(5), Interval(0, None), 0) == {0}
        assert down_cl_ivl(unit_stamps(3), Interval(5, 9), 2) == set()

    def test_up_closure(self):
        assert up_cl_ivl(unit_stamps(5), Interval(0, 2), 0) == {0, 1, 2}
        assert up_cl_ivl(unit_stamps(5), Interval(1, 1), 4) == set()
        p = prefix([(frozenset(), t) for t in (0, 1, 1, 1)])
        assert up_cl_ivl(p, Interval(0, 0), 2) == {2, 3}


class TestSat:
    def test_top(self):
        p = unit_stamps(2)
        assert sat(p, (), (), 1, TOP)

    def test_piracy(self):
        assert sat(prefix(PIRACY_TRACE), (), (2,), 1, PIRATED)
        assert not sat(prefix(PIRACY_TRACE), (), (1,), 1, PIRATED)

    def test_open_window_is_undetermined(self):
        with pytest.raises(UndeterminedTimePoint):
            sat(prefix(PIRACY_TRACE), (), (2,), 3, PIRATED)

    def test_beyond_prefix(self):
        with pytest.raises(UndeterminedTimePoint):
            sat(unit_stamps(2), (), (), 2, TOP)


class TestDfv:
    def test_predicate(self):
        assert dfv(unit_stamps(1), (), 0, Pred("p", (x, Const(1), Var(2)))) == {0, 2}

    def test_empty_trigger_window(self):
        f = Trigger(Neg(Eq(x, x)), Interval(1, 2), Pred("p", (x,)))
        assert dfv(unit_stamps(3), (), 0, f) == frozenset()
        assert dfv(unit_stamps(3), (), 1, f) == {0}

    def test_conjunction_is_union(self):
        for seed in range(200):
            rng = random.Random(seed)
            a, b = random_safe(rng, 3), random_safe(rng, 3)
            f = And(a, b)
            o = Oracle(prefix_of(random_trace(rng, 6)), f)
            for i in range(len(o.p)):
                try:
                    assert o.dfv(i, f) == o.dfv(i, a) | o.dfv(i, b)
                except UndeterminedTimePoint:
                    break


class TestSatsTable:
    def test_best(self):
        assert sats_table(prefix(QUALITY_TRACE), 0, 1, BEST) == {(0,), (3,)}

    def test_pirated(self):
        assert sats_table(prefix(PIRACY_TRACE), 0, 1, PIRATED) == {(1,), (2,)}

    def test_closed_valid_formula(self):
        assert sats_table(unit_stamps(1), 0, 3, TOP) == unit_table(3)

    def test_unsafe_rejected(self):
        with pytest.raises(UnsafeFormula):
            sats_table(unit_stamps(1), 0, 1, Neg(Pred("p", (x,))))

    def test_fresh_values(self):
        o = Oracle(unit_stamps(1), Pred("p", (x, Var(1), Var(2))))
        assert [u for u in o.universe if isinstance(u, Fresh)] == [Fresh(0), Fresh(1), Fresh(2)]
        assert o.cells == [Fresh(0)]


def test_fresh_value_sufficiency():
    """Extra fresh values never change a verdict."""
    for seed in range(150):
        rng = random.Random(seed)
        f = random_safe(rng, 3)
        p = prefix_of(random_trace(rng, 6))
        small, big = Oracle(p, f), Oracle(p, f, fresh=5)
        for i in range(len(p)):
            try:
                assert small.sats_table(i) == big.sats_table(i)
            except UndeterminedTimePoint:
                break


def test_trigger_release_duality():
    assert [e for s in range(300) for e in duality(s)] == []


def test_coincidence():
    assert [e for s in range(300) for e in coincidence(s)] == []


def test_release_encoding_of_globally():
    p = prefix([({("p", (1,))}, 0), ({("p", (1,))}, 1), (frozenset(), 2), (frozenset(), 5)])
    g = Release(Neg(Eq(x, x)), Interval(0, 1), Pred("p", (x,)))
    assert sats_table(p, 0, 1, g) == {(1,)}
    assert sats_table(p, 1, 1, g) == frozenset()
    assert sats_table(p, 2, 1, g) == frozenset()
