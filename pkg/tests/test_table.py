import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfotl_monitor.table import (
    LengthMismatch,
    all_tuples,
    antijoin,
    big_join,
    eval_or,
    join,
    join1,
    project,
    qtable,
    unit_table,
    vtable,
    wf_tuple,
    wf_tuples,
)

N = None


class TestTuples:
    def test_wf_tuple(self):
        assert wf_tuple(2, set(), (N, N))
        assert wf_tuple(2, {0}, (4, N))
        assert not wf_tuple(2, {0}, (N, 4))
        assert not wf_tuple(3, {0}, (4, N))

    def test_unit_table(self):
        assert unit_table(0) == {()}
        assert unit_table(1) == {(N,)}
        assert unit_table(3) == {(N, N, N)}

    def test_join1(self):
        assert join1((1, N), (N, 2)) == (1, 2)
        assert join1((1,), (1,)) == (1,)
        assert join1((1,), (2,)) is None
        with pytest.raises(LengthMismatch):
            join1((1,), (1, 2))

    def test_project(self):
        assert project(set(), (1, 2)) == (N, N)
        assert project({0}, (1, 2)) == (1, N)
        assert project({0, 1}, (1, 2)) == (1, 2)


class TestOperators:
    def test_join(self):
        R = frozenset({(1, N), (2, N)})
        assert join(R, unit_table(2)) == R
        assert join({(1, N)}, {(N, 2)}) == {(1, 2)}
        assert join({(1,)}, {(2,)}) == frozenset()
        with pytest.raises(LengthMismatch):
            join({(1,)}, {(1, 2)})

    def test_antijoin(self):
        R = frozenset({(1,), (2,)})
        assert antijoin(R, frozenset()) == R
        assert antijoin(R, {(2,)}) == {(1,)}
        assert antijoin(R, unit_table(1)) == frozenset()
        assert antijoin({(1, 2), (1, 3), (2, 2)}, {(1, N)}) == {(2, 2)}

    def test_eval_or(self):
        assert eval_or(2, unit_table(2), {(1, 2)}) == unit_table(2)
        assert eval_or(2, {(1, 2)}, unit_table(2)) == unit_table(2)
        assert eval_or(1, frozenset(), frozenset()) == frozenset()
        assert eval_or(1, {(1,)}, {(2,)}) == {(1,), (2,)}

    def test_big_join(self):
        assert big_join([], 2) == unit_table(2)
        assert big_join([{("a",), ("b",)}, {("b",), ("c",)}], 1) == {("b",)}
        R = frozenset({(1, N)})
        assert big_join([R], 2) == R


class TestQtable:
    U = (0, 1)

    def test_unit_and_empty_dichotomy(self):
        top = lambda v: True
        bot = lambda v: False
        assert qtable(2, set(), top, top, unit_table(2), self.U)
        assert qtable(2, set(), top, bot, frozenset(), self.U)
        assert not qtable(2, set(), top, top, frozenset(), self.U)
        assert not qtable(1, {0}, top, top, {(N,)}, self.U)

    def test_against_naive_definition(self):
        """The wf-only shortcut agrees with quantifying over every tuple."""

        def naive(n, X, P, Q, R, U):
            if not vtable(n, X, R):
                return False
            return all(
                not P(v) or ((v in R) == (Q(v) and wf_tuple(n, X, v)))
                for v in all_tuples(n, U)
            )

        Q = lambda v: v[0] in (None, 1)
        for X in ({0}, set(), {0, 1}):
            for rows in itertools.chain.from_iterable(
                itertools.combinations(list(all_tuples(2, self.U)), k) for k in range(3)
            ):
                R = frozenset(rows)
                assert qtable(2, X, lambda v: True, Q, R, self.U) == naive(
                    2, X, lambda v: True, Q, R, self.U
                )

    def test_unit_table_attributes(self):
        for k in range(3):
            for X in itertools.chain.from_iterable(
                itertools.combinations(range(3), r) for r in range(4)
            ):
                assert vtable(3, X, unit_table(3)) == (len(X) == 0)


U = (0, 1, 2)
N_WIDTH = 3


def _attr_sets():
    return st.sets(st.integers(0, N_WIDTH - 1)).map(frozenset)


@st.composite
def tables_over(draw, X):
    rows = draw(st.sets(st.sampled_from(list(wf_tuples(N_WIDTH, X, U))), max_size=8))
    return frozenset(rows)


@st.composite
def attr_table(draw):
    X = draw(_attr_sets())
    return X, draw(tables_over(X))


@settings(max_examples=150, deadline=None)
@given(attr_table(), attr_table())
def test_join_lemma(t1, t2):
    (X, R1), (Y, R2) = t1, t2
    Q1 = lambda v: project(X, v) in R1
    Q2 = lambda v: project(Y, v) in R2
    assert qtable(N_WIDTH, X, lambda v: True, Q1, R1, U)
    assert qtable(N_WIDTH, Y, lambda v: True, Q2, R2, U)
    Q = lambda v: Q1(project(X, v)) and Q2(project(Y, v))
    assert qtable(N_WIDTH, X | Y, lambda v: True, Q, join(R1, R2), U)


@settings(max_examples=100, deadline=None)
@given(_attr_sets().flatmap(lambda X: st.tuples(st.just(X), st.lists(tables_over(X), min_size=1, max_size=4))))
def test_intersection_lemma(data):
    X, Rs = data
    Q = lambda v: all(project(X, v) in R for R in Rs)
    assert qtable(N_WIDTH, X, lambda v: True, Q, big_join(Rs, N_WIDTH), U)
    assert big_join(Rs, N_WIDTH) == frozenset.intersection(*Rs)


@settings(max_examples=150, deadline=None)
@given(attr_table(), attr_table(), attr_table())
def test_join_algebra(a, b, c):
    R, S, T = a[1], b[1], c[1]
    assert join(R, S) == join(S, R)
    assert join(join(R, S), T) == join(R, join(S, T))
    assert join(R, unit_table(N_WIDTH)) == R


@settings(max_examples=150, deadline=None)
@given(attr_table(), attr_table())
def test_eval_or_commutes(a, b):
    assert eval_or(N_WIDTH, a[1], b[1]) == eval_or(N_WIDTH, b[1], a[1])


@settings(max_examples=150, deadline=None)
@given(attr_table(), _attr_sets())
def test_antijoin_semantics(a, Y):
    X, R = a
    Y = Y & X
    S = frozenset(project(Y, v) for v in R if v[0] is None or v[0] != 0)
    expected = {v for v in R if project(Y, v) not in S}
    assert antijoin(R, S) == expected
