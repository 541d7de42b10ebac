"""Brute-force reference semantics over finite trace prefixes.

Everything here is deliberately naive: quantifiers range over a finite
universe (active domain, formula constants and enough fresh values), and
every temporal operator is evaluated by scanning its window.  Asking for a
verdict that depends on events past the end of the prefix raises
``UndeterminedTimePoint``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Sequence

from .formula import (
    And,
    Const,
    Eq,
    Exists,
    Formula,
    Interval,
    Neg,
    Next,
    Or,
    Pred,
    Prev,
    Release,
    Since,
    Term,
    Trigger,
    Until,
    Value,
    Var,
    constants,
    fv,
    max_nfv,
    nfv,
    subformulas,
)
from .safety import issafe
from .table import wf_tuples
from .trace import OutOfRange, TracePrefix


class UndeterminedTimePoint(Exception):
    """The prefix is too short to decide the requested verdict."""


class UnsafeFormula(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Fresh:
    """A domain value guaranteed to differ from every trace or formula value."""

    n: int

    def __repr__(self):
        return f"<fresh {self.n}>"


def eval_trm(v: Sequence[Value], t: Term) -> Value:
    if isinstance(t, Const):
        return t.value
    if t.index >= len(v):
        raise IndexError(f"variable {t.index} outside valuation of length {len(v)}")
    return v[t.index]


def down_cl_ivl(p: TracePrefix, interval: Interval, i: int) -> set[int]:
    ti = p.tau(i)
    return {j for j in range(i + 1) if interval.mem(ti - p.tau(j))}


def up_cl_ivl(p: TracePrefix, interval: Interval, i: int) -> set[int]:
    """Future window of ``i``, cut at the end of the prefix."""
    ti = p.tau(i)
    return {j for j in range(i, len(p)) if interval.mem(p.tau(j) - ti)}


def universe_for(
    p: TracePrefix, f: Formula, dom: Iterable[Value] = (), fresh: Optional[int] = None
) -> list:
    """Active domain, formula constants and ``fresh`` distinct fresh values.

    The default number of fresh values is the largest number of variables in
    scope at any subformula, so that every equality pattern among them can
    be realized outside the known values.
    """
    known = set(dom) | p.active_domain() | constants(f)
    k = max(1, max_nfv(f)) if fresh is None else fresh
    return sorted(known, key=_sort_key) + [Fresh(n) for n in range(k)]


def _sort_key(x):
    return (isinstance(x, str), x) if not isinstance(x, Fresh) else (2, x.n)


class Oracle:
    """Satisfaction and dynamic free variables of one formula on one prefix."""

    def __init__(
        self,
        p: TracePrefix,
        f: Formula,
        dom: Iterable[Value] = (),
        fresh: Optional[int] = None,
    ):
        self.p = p
        self.f = f
        self.universe = universe_for(p, f, dom, fresh)
        self._fv: dict[int, tuple[int, ...]] = {}
        self._nfv: dict[int, int] = {}
        self._keep = list(subformulas(f))  # pins ids for the memo tables
        for g in self._keep:
            if id(g) not in self._fv:
                self._fv[id(g)] = tuple(sorted(fv(g)))
                self._nfv[id(g)] = nfv(g)
        self._sat: dict = {}
        self._dfv: dict = {}

    # -- helpers ---------------------------------------------------------

    def _closed_future(self, interval: Interval, i: int):
        if interval.hi is None:
            raise UndeterminedTimePoint("unbounded future window")
        bound = self.p.tau(i) + interval.hi
        if self.p.tau(len(self.p) - 1) <= bound:
            raise UndeterminedTimePoint(f"future window of time-point {i} still open")

    def _check(self, i: int):
        if not 0 <= i < len(self.p):
            raise UndeterminedTimePoint(f"time-point {i} beyond prefix")

    def _fv_of(self, g: Formula) -> tuple[int, ...]:
        try:
            return self._fv[id(g)]
        except KeyError:
            out = self._fv[id(g)] = tuple(sorted(fv(g)))
            self._keep.append(g)
            return out

    def _nfv_of(self, g: Formula) -> int:
        try:
            return self._nfv[id(g)]
        except KeyError:
            out = self._nfv[id(g)] = nfv(g)
            self._keep.append(g)
            return out

    def valuations(self, g: Formula):
        """All total valuations of length ``nfv g`` over the universe."""
        return product(self.universe, repeat=self._nfv_of(g))

    # -- satisfaction ----------------------------------------------------

    def sat(self, v: Sequence[Value], i: int, g: Optional[Formula] = None) -> bool:
        g = self.f if g is None else g
        self._check(i)
        key = (id(g), i, tuple(v[x] for x in self._fv_of(g)))
        hit = self._sat.get(key)
        if hit is None:
            hit = self._sat[key] = self._sat_raw(v, i, g)
        return hit

    def _sat_raw(self, v, i: int, g: Formula) -> bool:
        p, sat = self.p, self.sat
        match g:
            case Pred(name, args):
                return (name, tuple(eval_trm(v, t) for t in args)) in p.gamma(i)
            case Eq(t1, t2):
                return eval_trm(v, t1) == eval_trm(v, t2)
            case Neg(a):
                return not sat(v, i, a)
            case And(a, b):
                return sat(v, i, a) and sat(v, i, b)
            case Or(a, b):
                return sat(v, i, a) or sat(v, i, b)
            case Exists(body):
                return any(sat((z, *v), i, body) for z in self.universe)
            case Prev(I, a):
                return i > 0 and I.mem(p.tau(i) - p.tau(i - 1)) and sat(v, i - 1, a)
            case Next(I, a):
                self._check(i + 1)
                return I.mem(p.tau(i + 1) - p.tau(i)) and sat(v, i + 1, a)
            case Since(a, I, b):
                for j in range(i, -1, -1):
                    d = p.tau(i) - p.tau(j)
                    if not I.mem_r(d):
                        return False
                    if I.mem_l(d) and sat(v, j, b):
                        return True
                    if not sat(v, j, a):
                        return False
                return False
            case Until(a, I, b):
                self._closed_future(I, i)
                for j in range(i, len(p)):
                    d = p.tau(j) - p.tau(i)
                    if not I.mem_r(d):
                        return False
                    if I.mem_l(d) and sat(v, j, b):
                        return True
                    if not sat(v, j, a):
                        return False
                return False
            case Trigger(a, I, b):
                for j in range(i, -1, -1):
                    d = p.tau(i) - p.tau(j)
                    if not I.mem_r(d):
                        return True
                    if I.mem_l(d) and not sat(v, j, b):
                        return False
                    if sat(v, j, a):
                        return True
                return True
            case Release(a, I, b):
                self._closed_future(I, i)
                for j in range(i, len(p)):
                    d = p.tau(j) - p.tau(i)
                    if not I.mem_r(d):
                        return True
                    if I.mem_l(d) and not sat(v, j, b):
                        return False
                    if sat(v, j, a):
                        return True
                return True
        raise TypeError(f"not a formula: {g!r}")

    def satisfiable_at(self, i: int, g: Formula) -> bool:
        return any(self.sat(v, i, g) for v in self.valuations(g))

    # -- dynamic free variables -----------------------------------------

    def dfv(self, i: int, g: Optional[Formula] = None) -> frozenset[int]:
        g = self.f if g is None else g
        key = (id(g), i)
        hit = self._dfv.get(key)
        if hit is None:
            hit = self._dfv[key] = frozenset(self._dfv_raw(i, g))
        return hit

    def _dfv_raw(self, i: int, g: Formula) -> frozenset[int]:
        p, sat, dfv = self.p, self.sat, self.dfv
        match g:
            case Pred() | Eq():
                return fv(g)
            case Neg(a):
                return dfv(i, a)
            case And(a, b):
                return dfv(i, a) | dfv(i, b)
            case Or(a, b):
                da = dfv(i, a)
                if not da:
                    return dfv(i, b) if not self.satisfiable_at(i, a) else frozenset()
                db = dfv(i, b)
                if not db:
                    return da if not self.satisfiable_at(i, b) else frozenset()
                return da | db
            case Exists(body):
                return frozenset(x - 1 for x in dfv(i, body) if x != 0)
            case Prev(_, a):
                return fv(a) if i == 0 else dfv(i - 1, a)
            case Next(_, a):
                return dfv(i + 1, a)
            case Since(a, I, b):
                self._check(i)
                window = sorted(down_cl_ivl(p, I, i))

                def satisf_at(j):
                    return any(
                        sat(v, j, b) and all(sat(v, k, a) for k in range(j + 1, i + 1))
                        for v in self.valuations(g)
                    )

                J = [j for j in window if satisf_at(j)]
                if not J:
                    return fv(g)
                K = {k for j in J for k in range(j + 1, i + 1)}
                return self._union_dfv(K, a, J, b)
            case Until(a, I, b):
                self._check(i)
                self._closed_future(I, i)
                window = sorted(up_cl_ivl(p, I, i))

                def satisf_at(j):
                    return any(
                        sat(v, j, b) and all(sat(v, k, a) for k in range(i, j))
                        for v in self.valuations(g)
                    )

                J = [j for j in window if satisf_at(j)]
                if not J:
                    return fv(g)
                K = {k for j in J for k in range(i, j)}
                return self._union_dfv(K, a, J, b)
            case Trigger(a, I, b):
                self._check(i)
                window = sorted(down_cl_ivl(p, I, i))
                if not window:
                    return frozenset()

                def satisf(v, j):
                    return sat(v, j, b) or any(sat(v, k, a) for k in range(j + 1, i + 1))

                if all(any(not satisf(v, j) for j in window) for v in self.valuations(g)):
                    return fv(g)
                J = [j for j in window if self.satisfiable_at(j, b)]
                lo = window[0]
                K = [
                    k
                    for k in range(lo + 1, i + 1)
                    if self.satisfiable_at(k, a)
                ]
                return self._union_dfv(K, a, J, b)
            case Release(a, I, b):
                self._check(i)
                self._closed_future(I, i)
                window = sorted(up_cl_ivl(p, I, i))
                if not window:
                    return frozenset()

                def satisf(v, j):
                    return sat(v, j, b) or any(sat(v, k, a) for k in range(i, j))

                if all(any(not satisf(v, j) for j in window) for v in self.valuations(g)):
                    return fv(g)
                J = [j for j in window if self.satisfiable_at(j, b)]
                hi = window[-1]
                K = [k for k in range(i, hi) if self.satisfiable_at(k, a)]
                return self._union_dfv(K, a, J, b)
        raise TypeError(f"not a formula: {g!r}")

    def _union_dfv(self, K, a, J, b) -> frozenset[int]:
        out: set[int] = set()
        for k in K:
            out |= self.dfv(k, a)
        for j in J:
            out |= self.dfv(j, b)
        return frozenset(out)

    # -- tables ------------------------------------------------------------

    @property
    def cells(self) -> list:
        """Known values plus one fresh value: enough to tell finite tables
        from infinite ones."""
        return [u for u in self.universe if not isinstance(u, Fresh) or u.n == 0]

    def complete(self, t: Sequence) -> tuple:
        """Fill ``None`` cells with an arbitrary fixed value."""
        filler = self.universe[0]
        return tuple(filler if c is None else c for c in t)

    def table(self, i: int, g: Optional[Formula] = None, n: Optional[int] = None) -> frozenset:
        """Satisfying tuples of ``g`` at ``i``, width ``n``, attributes ``dfv``.

        An unsafe ``g`` with infinitely many satisfying rows shows up as a row
        mentioning ``Fresh(0)``.
        """
        g = self.f if g is None else g
        n = self._nfv_of(g) if n is None else n
        if n < self._nfv_of(g):
            raise ValueError(f"width {n} below nfv {self._nfv_of(g)}")
        X = self.dfv(i, g)
        return frozenset(
            t for t in wf_tuples(n, X, self.cells) if self.sat(self.complete(t), i, g)
        )

    def sats_table(self, i: int, n: Optional[int] = None) -> frozenset:
        return self.table(i, self.f, n)


def sat(p: TracePrefix, dom, v: Sequence[Value], i: int, f: Formula) -> bool:
    return Oracle(p, f, dom).sat(v, i)


def dfv(p: TracePrefix, dom, i: int, f: Formula) -> frozenset[int]:
    return Oracle(p, f, dom).dfv(i)


def sats_table(p: TracePrefix, i: int, n: int, f: Formula) -> frozenset:
    if not issafe(f):
        raise UnsafeFormula("formula is not safe")
    return Oracle(p, f).sats_table(i, n)


__all__ = [
    "Fresh",
    "Oracle",
    "OutOfRange",
    "UndeterminedTimePoint",
    "UnsafeFormula",
    "dfv",
    "down_cl_ivl",
    "eval_trm",
    "sat",
    "sats_table",
    "universe_for",
    "up_cl_ivl",
]
