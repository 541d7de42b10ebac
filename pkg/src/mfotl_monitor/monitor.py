"""Incremental monitor.

``minit`` compiles a safe, future-bounded formula into a tree of monitor
nodes; ``mstep`` feeds it one time-stamped database and returns the
satisfying tuples of every time-point whose verdict has become known.
Nodes are immutable: each step builds a new tree.

Every table produced for a subformula has width ``n`` (the number of
variables in scope) and attributes equal to the dynamic free variables of
that subformula at that time-point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from . import table as T
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
    Var,
    future_bounded,
    fv,
    nfv,
)
from .oracle import UnsafeFormula
from .safety import is_constraint, safe_assignment, ssfv
from .trace import MonotonicityViolation, TracePrefix

EMPTY = T.EMPTY


class UnboundedFuture(ValueError):
    pass


Buf2 = tuple  # (tuple[Table, ...], tuple[Table, ...])
EMPTY_BUF: Buf2 = ((), ())


# -- monitor nodes ------------------------------------------------------------


class MFormula:
    __slots__ = ()


@dataclass(frozen=True)
class MRel(MFormula):
    table: frozenset


@dataclass(frozen=True)
class MPred(MFormula):
    name: str
    args: tuple


@dataclass(frozen=True)
class MNeg(MFormula):
    """Negation of a subformula whose tables never have attributes."""

    arg: MFormula


@dataclass(frozen=True)
class MAnd(MFormula):
    """``kind`` is one of join, antijoin, assign, constraint.

    For join and antijoin ``right`` is a monitor node; for assign and
    constraint it is the equality (or negated equality) formula itself and
    ``buf`` stays empty.
    """

    kind: str
    left: MFormula
    right: Union[MFormula, Formula]
    buf: Buf2 = EMPTY_BUF


@dataclass(frozen=True)
class MOr(MFormula):
    left: MFormula
    right: MFormula
    buf: Buf2 = EMPTY_BUF


@dataclass(frozen=True)
class MExists(MFormula):
    arg: MFormula


@dataclass(frozen=True)
class MPrev(MFormula):
    interval: Interval
    arg: MFormula
    first: bool = True
    buf: tuple = ()
    nts: tuple = ()


@dataclass(frozen=True)
class MNext(MFormula):
    interval: Interval
    arg: MFormula
    first: bool = True
    nts: tuple = ()


@dataclass(frozen=True)
class MSince(MFormula):
    pos: bool
    left: MFormula
    interval: Interval
    right: MFormula
    buf: Buf2 = EMPTY_BUF
    nts: tuple = ()
    aux: tuple = ()  # ((ts, table), ...), newest stamp first


@dataclass(frozen=True)
class MUntil(MFormula):
    pos: bool
    left: MFormula
    interval: Interval
    right: MFormula
    buf: Buf2 = EMPTY_BUF
    nts: tuple = ()
    aux: tuple = ()  # ((ts, lefts, result), ...), oldest first


@dataclass(frozen=True)
class MTrigger(MFormula):
    pos: bool
    left: MFormula
    mem0: bool
    interval: Interval
    right: MFormula
    buf: Buf2 = EMPTY_BUF
    nts: tuple = ()
    aux: tuple = ()  # ((ts, table), ...), newest stamp first


@dataclass(frozen=True)
class MRelease(MFormula):
    pos: bool
    left: MFormula
    mem0: bool
    interval: Interval
    right: MFormula
    buf: Buf2 = EMPTY_BUF
    nts: tuple = ()
    aux: tuple = ()  # ((ts, left, right), ...), oldest first


@dataclass(frozen=True)
class MonitorState:
    next_output: int
    mf: MFormula
    n: int
    last_ts: Optional[int] = None


# -- compilation ------------------------------------------------------------


def and_kind(a: Formula, b: Formula) -> str:
    """Which conjunction clause of ``ssfv`` licenses ``a AND b``."""
    A = ssfv(a)
    if not A:
        raise UnsafeFormula(f"unsafe left conjunct: {a}")
    if ssfv(b):
        return "join"
    if all(safe_assignment(X, b) for X in A):
        return "assign"
    if is_constraint(b) and all(fv(b) <= X for X in A):
        return "constraint"
    if isinstance(b, Neg) and ssfv(b.arg) and all(Y <= X for Y in ssfv(b.arg) for X in A):
        return "antijoin"
    raise UnsafeFormula(f"unsafe conjunction: {a} AND {b}")


def split_left(a: Formula) -> tuple[bool, Formula]:
    """Polarity and operand actually evaluated for the left side of a
    since-like operator: a negation with a safe body is stripped."""
    if isinstance(a, Neg) and ssfv(a.arg):
        return False, a.arg
    return True, a


def minit0(n: int, f: Formula) -> MFormula:
    match f:
        case Pred(name, args):
            return MPred(name, tuple(args))
        case Eq(Const(a), Const(b)):
            return MRel(T.unit_table(n) if a == b else EMPTY)
        case Eq(Var(x), Const(c)) | Eq(Const(c), Var(x)):
            return MRel(frozenset((_cell(n, x, c),)))
        case Eq():
            raise UnsafeFormula(f"unsafe equality: {f}")
        case Neg(Eq(t1, t2)) if t1 == t2:
            return MRel(EMPTY)
        case Neg(Eq(Const(a), Const(b))):
            return MRel(EMPTY if a == b else T.unit_table(n))
        case Neg(a):
            if ssfv(a) != frozenset((frozenset(),)):
                raise UnsafeFormula(f"unsafe negation: {f}")
            return MNeg(minit0(n, a))
        case And(a, b):
            kind = and_kind(a, b)
            left = minit0(n, a)
            if kind == "join":
                return MAnd(kind, left, minit0(n, b))
            if kind == "antijoin":
                return MAnd(kind, left, minit0(n, b.arg))
            return MAnd(kind, left, b)
        case Or(a, b):
            if not ssfv(f):
                raise UnsafeFormula(f"unsafe disjunction: {f}")
            return MOr(minit0(n, a), minit0(n, b))
        case Exists(body):
            return MExists(minit0(n + 1, body))
        case Prev(I, a):
            return MPrev(I, minit0(n, a))
        case Next(I, a):
            return MNext(I, minit0(n, a))
        case Since(a, I, b) | Until(a, I, b):
            if not ssfv(f):
                raise UnsafeFormula(f"unsafe temporal formula: {f}")
            pos, a1 = split_left(a)
            node = MSince if isinstance(f, Since) else MUntil
            return node(pos, minit0(n, a1), I, minit0(n, b))
        case Trigger(a, I, b) | Release(a, I, b):
            if not ssfv(f):
                raise UnsafeFormula(f"unsafe temporal formula: {f}")
            mem0 = I.mem(0)
            if mem0:
                pos, a1 = split_left(a)
            else:
                pos, a1 = not isinstance(a, Neg), a
            node = MTrigger if isinstance(f, Trigger) else MRelease
            return node(pos, minit0(n, a1), mem0, I, minit0(n, b))
    raise TypeError(f"not a formula: {f!r}")


def _cell(n: int, x: int, c) -> tuple:
    v = [None] * n
    v[x] = c
    return tuple(v)


def minit(f: Formula) -> MonitorState:
    if not ssfv(f):
        raise UnsafeFormula(f"formula is not safe: {f}")
    if not future_bounded(f):
        raise UnboundedFuture("every UNTIL and RELEASE needs a finite upper bound")
    n = nfv(f)
    return MonitorState(0, minit0(n, f), n)


# -- buffers ----------------------------------------------------------------


def mbuf2_add(xs: Sequence, ys: Sequence, buf: Buf2) -> Buf2:
    return (buf[0] + tuple(xs), buf[1] + tuple(ys))


def mbuf2_take(buf: Buf2) -> tuple[list[tuple], Buf2]:
    """Split off all positionally matched pairs."""
    xs, ys = buf
    k = min(len(xs), len(ys))
    return list(zip(xs[:k], ys[:k])), (xs[k:], ys[k:])


def _joinstar(pos: bool, R, S) -> frozenset:
    return T.join(R, S) if pos else T.antijoin(R, S)


# -- auxiliary state updates ------------------------------------------------


def update_since(I: Interval, pos: bool, A, B, nt: int, aux: tuple):
    kept = tuple(
        (t, _joinstar(pos, R, A)) for t, R in aux if I.mem_r(nt - t)
    )
    if kept and kept[0][0] == nt:
        kept = ((nt, kept[0][1] | B),) + kept[1:]
    else:
        kept = ((nt, frozenset(B)),) + kept
    out = frozenset().union(*(R for t, R in kept if I.mem_l(nt - t)))
    return out, kept


def update_until(I: Interval, pos: bool, A, B, nt: int, aux: tuple) -> tuple:
    new = tuple(
        (
            t,
            T.join(a1, A) if pos else a1 | A,
            a2 | _joinstar(pos, B, a1) if I.mem(nt - t) else a2,
        )
        for t, a1, a2 in aux
    )
    return new + ((nt, frozenset(A), frozenset(B) if I.lo == 0 else EMPTY),)


def eval_until(I: Interval, nt: int, aux: tuple) -> tuple[list, tuple]:
    """Emit the results of entries whose window has fully elapsed."""
    out = []
    k = 0
    while k < len(aux) and aux[k][0] + I.hi < nt:
        out.append(aux[k][2])
        k += 1
    return out, aux[k:]


def update_trigger(I: Interval, mem0: bool, pos: bool, A, B, nt: int, aux: tuple, n: int):
    extra = _joinstar(pos, B, A) if mem0 else frozenset(A)
    kept = tuple((t, R | extra) for t, R in aux if I.mem_r(nt - t))
    if kept and kept[0][0] == nt:
        kept = ((nt, T.join(kept[0][1], B)),) + kept[1:]
    else:
        kept = ((nt, frozenset(B)),) + kept
    out = T.big_join((R for t, R in kept if I.mem_l(nt - t)), n)
    return out, kept


def update_release(I: Interval, mem0: bool, pos: bool, A, B, nt: int, aux: tuple, n: int) -> tuple:
    extra = _joinstar(pos, B, A) if mem0 else frozenset(A)
    new = tuple(
        (t, L | extra, T.join(R, B | L) if I.mem(nt - t) else R)
        for t, L, R in aux
    )
    last = (nt, extra, frozenset(B) if mem0 else T.unit_table(n))
    return new + (last,)


def eval_future(I: Interval, nt: int, aux: tuple) -> tuple[list, tuple]:
    out = []
    k = 0
    while k < len(aux) and aux[k][0] + I.hi < nt:
        out.append(aux[k][2])
        k += 1
    return out, aux[k:]


# -- evaluation -------------------------------------------------------------


def _match(n: int, args: tuple[Term, ...], vals: tuple) -> Optional[tuple]:
    if len(args) != len(vals):
        return None
    v: list = [None] * n
    for t, a in zip(args, vals):
        if isinstance(t, Const):
            if t.value != a:
                return None
        elif v[t.index] is None:
            v[t.index] = a
        elif v[t.index] != a:
            return None
    return tuple(v)


def _row_val(row: tuple, t: Term):
    return t.value if isinstance(t, Const) else row[t.index]


def _assign(R: Iterable[tuple], eq: Eq) -> frozenset:
    out = set()
    for row in R:
        l, r = _row_val(row, eq.left), _row_val(row, eq.right)
        if l is not None and r is not None:
            if l == r:
                out.add(row)
            continue
        if l is None and r is None:
            raise AssertionError(f"assignment {eq} with both sides undefined")
        target, val = (eq.left, r) if l is None else (eq.right, l)
        new = list(row)
        new[target.index] = val
        out.add(tuple(new))
    return frozenset(out)


def _constraint(R: Iterable[tuple], c: Formula) -> frozenset:
    neg = isinstance(c, Neg)
    eq = c.arg if neg else c
    return frozenset(
        row
        for row in R
        if (_row_val(row, eq.left) == _row_val(row, eq.right)) != neg
    )


def _pair_stamps(nts: tuple, k: int) -> tuple[tuple, tuple]:
    return nts[:k], nts[k:]


def meval(n: int, ts: int, db, mf: MFormula) -> tuple[list, MFormula]:
    match mf:
        case MRel(R):
            return [R], mf
        case MPred(name, args):
            rows = set()
            for ename, vals in db:
                if ename == name:
                    v = _match(n, args, vals)
                    if v is not None:
                        rows.add(v)
            return [frozenset(rows)], mf
        case MNeg(a):
            xs, a = meval(n, ts, db, a)
            unit = T.unit_table(n)
            return [unit if not R else EMPTY for R in xs], MNeg(a)
        case MAnd(kind, left, right, buf):
            xs, left = meval(n, ts, db, left)
            if kind == "assign":
                return [_assign(R, right) for R in xs], MAnd(kind, left, right)
            if kind == "constraint":
                return [_constraint(R, right) for R in xs], MAnd(kind, left, right)
            ys, right = meval(n, ts, db, right)
            pairs, buf = mbuf2_take(mbuf2_add(xs, ys, buf))
            op = T.join if kind == "join" else T.antijoin
            return [op(R, S) for R, S in pairs], MAnd(kind, left, right, buf)
        case MOr(left, right, buf):
            xs, left = meval(n, ts, db, left)
            ys, right = meval(n, ts, db, right)
            pairs, buf = mbuf2_take(mbuf2_add(xs, ys, buf))
            return [T.eval_or(n, R, S) for R, S in pairs], MOr(left, right, buf)
        case MExists(a):
            xs, a = meval(n + 1, ts, db, a)
            return [frozenset(row[1:] for row in R) for R in xs], MExists(a)
        case MPrev(I, a, first, buf, nts):
            xs, a = meval(n, ts, db, a)
            zs, buf, nts = _prev_next(I, buf + tuple(xs), nts + (ts,))
            if first:
                zs = [EMPTY] + zs
            return zs, MPrev(I, a, False, buf, nts)
        case MNext(I, a, first, nts):
            xs, a = meval(n, ts, db, a)
            if first and xs:
                xs, first = xs[1:], False
            zs, _, nts = _prev_next(I, tuple(xs), nts + (ts,))
            return zs, MNext(I, a, first, nts)
        case MSince(pos, left, I, right, buf, nts, aux):
            xs, left = meval(n, ts, db, left)
            ys, right = meval(n, ts, db, right)
            pairs, buf = mbuf2_take(mbuf2_add(xs, ys, buf))
            used, nts = _pair_stamps(nts + (ts,), len(pairs))
            out = []
            for (A, B), nt in zip(pairs, used):
                R, aux = update_since(I, pos, A, B, nt, aux)
                out.append(R)
            return out, MSince(pos, left, I, right, buf, nts, aux)
        case MUntil(pos, left, I, right, buf, nts, aux):
            xs, left = meval(n, ts, db, left)
            ys, right = meval(n, ts, db, right)
            pairs, buf = mbuf2_take(mbuf2_add(xs, ys, buf))
            used, nts = _pair_stamps(nts + (ts,), len(pairs))
            for (A, B), nt in zip(pairs, used):
                aux = update_until(I, pos, A, B, nt, aux)
            out, aux = eval_until(I, nts[0] if nts else ts, aux)
            return out, MUntil(pos, left, I, right, buf, nts, aux)
        case MTrigger(pos, left, mem0, I, right, buf, nts, aux):
            xs, left = meval(n, ts, db, left)
            ys, right = meval(n, ts, db, right)
            pairs, buf = mbuf2_take(mbuf2_add(xs, ys, buf))
            used, nts = _pair_stamps(nts + (ts,), len(pairs))
            out = []
            for (A, B), nt in zip(pairs, used):
                R, aux = update_trigger(I, mem0, pos, A, B, nt, aux, n)
                out.append(R)
            return out, MTrigger(pos, left, mem0, I, right, buf, nts, aux)
        case MRelease(pos, left, mem0, I, right, buf, nts, aux):
            xs, left = meval(n, ts, db, left)
            ys, right = meval(n, ts, db, right)
            pairs, buf = mbuf2_take(mbuf2_add(xs, ys, buf))
            used, nts = _pair_stamps(nts + (ts,), len(pairs))
            for (A, B), nt in zip(pairs, used):
                aux = update_release(I, mem0, pos, A, B, nt, aux, n)
            out, aux = eval_future(I, nts[0] if nts else ts, aux)
            return out, MRelease(pos, left, mem0, I, right, buf, nts, aux)
    raise TypeError(f"not a monitor node: {mf!r}")


def _prev_next(I: Interval, xs: tuple, nts: tuple) -> tuple[list, tuple, tuple]:
    """Pair each table with the gap to the following stamp."""
    out = []
    k = 0
    while k < len(xs) and k + 1 < len(nts):
        out.append(xs[k] if I.mem(nts[k + 1] - nts[k]) else EMPTY)
        k += 1
    return out, xs[k:], nts[k:]


def mstep_tables(db, ts: int, st: MonitorState) -> tuple[list[tuple[int, frozenset]], MonitorState]:
    """One step; returns ``(time-point, table)`` for every newly decided point."""
    if st.last_ts is not None and ts < st.last_ts:
        raise MonotonicityViolation(f"time-stamp {ts} follows {st.last_ts}")
    db = frozenset((name, tuple(args)) for name, args in db)
    tables, mf = meval(st.n, ts, db, st.mf)
    i = st.next_output
    out = [(i + k, R) for k, R in enumerate(tables)]
    return out, MonitorState(i + len(tables), mf, st.n, ts)


def mstep(entry: tuple, st: MonitorState) -> tuple[set, MonitorState]:
    """Consume ``(db, ts)``; return the set of ``(time-point, tuple)`` pairs."""
    db, ts = entry
    out, st = mstep_tables(db, ts, st)
    return {(i, v) for i, R in out for v in R}, st


def run(f: Formula, entries: Iterable[tuple]) -> tuple[dict[int, frozenset], MonitorState]:
    """Monitor ``f`` over ``(db, ts)`` entries; returns tables by time-point."""
    st = minit(f)
    out: dict[int, frozenset] = {}
    for db, ts in entries:
        res, st = mstep_tables(db, ts, st)
        out.update(res)
    return out, st


# -- progress ---------------------------------------------------------------


def progress(p: TracePrefix, f: Formula) -> int:
    """Number of leading time-points whose verdict ``p`` already determines
    (as the monitor tracks it)."""
    n = len(p)
    match f:
        case Pred() | Eq():
            return n
        case Neg(a) | Exists(a):
            return progress(p, a)
        case And(a, b) | Or(a, b):
            if isinstance(f, And) and and_kind(a, b) in ("assign", "constraint"):
                return progress(p, a)
            return min(progress(p, a), progress(p, b))
        case Prev(_, a):
            return 0 if n == 0 else min(progress(p, a) + 1, n)
        case Next(_, a):
            return max(progress(p, a) - 1, 0)
        case Since(a, _, b) | Trigger(a, _, b):
            return min(progress(p, a), progress(p, b))
        case Until(a, I, b) | Release(a, I, b):
            m = min(progress(p, a), progress(p, b))
            if I.hi is None:
                raise UnboundedFuture("unbounded future operator")
            if n == 0:
                return 0
            last = p.tau(min(m, n - 1))
            for i in range(m):
                if last <= p.tau(i) + I.hi:
                    return i
            return m
    raise TypeError(f"not a formula: {f!r}")
