"""Executable structural invariants of monitor states.

``check_state`` walks a formula and its monitor tree side by side and
compares every buffer, stamp list and auxiliary table against the reference
semantics on the consumed prefix.  It returns a list of human-readable
violations (empty when the state is well-formed).
"""

from __future__ import annotations

from typing import Callable

from . import table as T
from .formula import (
    And,
    Eq,
    Exists,
    Formula,
    Neg,
    Next,
    Or,
    Pred,
    Prev,
    Release,
    Since,
    Trigger,
    Until,
    fv,
)
from .monitor import (
    MAnd,
    MExists,
    MFormula,
    MNeg,
    MNext,
    MOr,
    MonitorState,
    MPred,
    MPrev,
    MRel,
    MRelease,
    MSince,
    MTrigger,
    MUntil,
    and_kind,
    progress,
    split_left,
)
from .oracle import Oracle
from .trace import TracePrefix


class _Checker:
    def __init__(self, p: TracePrefix, root: Formula):
        self.p = p
        self.o = Oracle(p, root)
        self.errors: list[str] = []
        self._prog: dict[int, int] = {}

    def fail(self, where: Formula, msg: str):
        self.errors.append(f"{type(where).__name__}: {msg}")

    def prog(self, g: Formula) -> int:
        k = id(g)
        if k not in self._prog:
            self._prog[k] = progress(self.p, g)
            self.o._fv_of(g)  # pin g so its id stays unique
        return self._prog[k]

    def stamps(self, lo: int, hi: int) -> tuple:
        return tuple(self.p.tau(k) for k in range(lo, hi))

    def sat(self, g: Formula, i: int, v) -> bool:
        return self.o.sat(self.o.complete(v), i, g)

    def qtable(self, n: int, X, Q: Callable, R) -> bool:
        return T.qtable(n, X, lambda v: True, Q, R, self.o.cells)

    # -- buffers ----------------------------------------------------------

    def buffer(self, where, n, g, tables, lo, hi, label):
        if len(tables) != hi - lo:
            self.fail(where, f"{label} buffer holds {len(tables)} tables, expected {hi - lo}")
            return
        for k, R in zip(range(lo, hi), tables):
            if R != self.o.table(k, g, n):
                self.fail(where, f"{label} buffer table for time-point {k} differs from reference")

    def buf2(self, where, n, a, b, buf):
        pa, pb = self.prog(a), self.prog(b)
        m = min(pa, pb)
        self.buffer(where, n, a, buf[0], m, pa, "left")
        self.buffer(where, n, b, buf[1], m, pb, "right")
        if buf[0] and buf[1]:
            self.fail(where, "both buffer queues non-empty")
        return m

    def nts(self, where, nts, lo):
        if tuple(nts) != self.stamps(lo, len(self.p)):
            self.fail(where, f"pending stamps {nts} != stamps from time-point {lo}")

    # -- walk -------------------------------------------------------------

    def walk(self, f: Formula, mf: MFormula, n: int):
        match f, mf:
            case Pred(), MPred():
                return
            case (Eq() | Neg(Eq())), MRel():
                return
            case Neg(a), MNeg(ma):
                self.walk(a, ma, n)
            case And(a, b), MAnd(kind, ma, mb, buf):
                if kind != and_kind(a, b):
                    self.fail(f, f"conjunction compiled as {kind}, expected {and_kind(a, b)}")
                self.walk(a, ma, n)
                if kind in ("join", "antijoin"):
                    b1 = b if kind == "join" else b.arg
                    self.walk(b1, mb, n)
                    self.buf2(f, n, a, b1, buf)
                elif buf != ((), ()):
                    self.fail(f, "filter conjunction carries a buffer")
            case Or(a, b), MOr(ma, mb, buf):
                self.walk(a, ma, n)
                self.walk(b, mb, n)
                self.buf2(f, n, a, b, buf)
            case Exists(body), MExists(mb):
                self.walk(body, mb, n + 1)
            case Prev(_, a), MPrev(_, ma, first, buf, nts):
                self.walk(a, ma, n)
                size = len(self.p)
                if first != (size == 0):
                    self.fail(f, f"first flag {first} after {size} steps")
                if size:
                    P = self.prog(f)
                    self.buffer(f, n, a, buf, P - 1, self.prog(a), "pending")
                    self.nts(f, nts, P - 1)
            case Next(_, a), MNext(_, ma, first, nts):
                self.walk(a, ma, n)
                pa = self.prog(a)
                if first != (pa == 0):
                    self.fail(f, f"first flag {first} with child progress {pa}")
                self.nts(f, nts, self.prog(f))
            case Since(a, I, b), MSince(pos, ma, _, mb, buf, nts, aux):
                a1 = self._left(f, a, pos, True)
                self.walk(a1, ma, n)
                self.walk(b, mb, n)
                m = self.buf2(f, n, a1, b, buf)
                self.nts(f, nts, m)
                self.past_aux(f, n, a, I, b, aux, m - 1, since=True)
            case Trigger(a, I, b), MTrigger(pos, ma, mem0, _, mb, buf, nts, aux):
                if mem0 != I.mem(0):
                    self.fail(f, "mem0 flag disagrees with interval")
                a1 = self._left(f, a, pos, mem0)
                self.walk(a1, ma, n)
                self.walk(b, mb, n)
                m = self.buf2(f, n, a1, b, buf)
                self.nts(f, nts, m)
                self.past_aux(f, n, a, I, b, aux, m - 1, since=False)
            case Until(a, I, b), MUntil(pos, ma, _, mb, buf, nts, aux):
                a1 = self._left(f, a, pos, True)
                self.walk(a1, ma, n)
                self.walk(b, mb, n)
                m = self.buf2(f, n, a1, b, buf)
                self.nts(f, nts, m)
                self.until_aux(f, n, a, I, b, aux, m)
            case Release(a, I, b), MRelease(pos, ma, mem0, _, mb, buf, nts, aux):
                if mem0 != I.mem(0):
                    self.fail(f, "mem0 flag disagrees with interval")
                a1 = self._left(f, a, pos, mem0)
                self.walk(a1, ma, n)
                self.walk(b, mb, n)
                m = self.buf2(f, n, a1, b, buf)
                self.nts(f, nts, m)
                self.release_aux(f, n, a, I, b, mem0, aux, m)
            case _:
                self.fail(f, f"monitor node {type(mf).__name__} does not match formula")

    def _left(self, f, a, pos, strip_allowed) -> Formula:
        if strip_allowed:
            want_pos, a1 = split_left(a)
        else:
            want_pos, a1 = not isinstance(a, Neg), a
        if pos != want_pos:
            self.fail(f, f"polarity {pos}, expected {want_pos}")
        return a1

    # -- auxiliary states -------------------------------------------------

    def past_aux(self, f, n, a, I, b, aux, iota, since: bool):
        """Stamp discipline plus per-stamp table contents for since/trigger."""
        if iota < 0:
            if aux:
                self.fail(f, "auxiliary state non-empty before first evaluation")
            return
        p = self.p
        t_iota = p.tau(iota)
        stamps = [t for t, _ in aux]
        if any(x <= y for x, y in zip(stamps, stamps[1:])):
            self.fail(f, f"stamps {stamps} not strictly decreasing")
        if any(t > t_iota or not I.mem_r(t_iota - t) for t in stamps):
            self.fail(f, f"stamps {stamps} outside the window of {t_iota}")
        expected = {p.tau(j) for j in range(iota + 1) if I.mem_r(t_iota - p.tau(j))}
        if set(stamps) != expected:
            self.fail(f, f"stamps {sorted(stamps)} != {sorted(expected)}")
        Y = fv(b)
        mem0 = I.mem(0)
        for t, R in aux:
            js = [j for j in range(iota + 1) if p.tau(j) == t]
            if since:
                def Q(v, js=js):
                    return any(
                        self.sat(b, j, v)
                        and all(self.sat(a, k, v) for k in range(j + 1, iota + 1))
                        for j in js
                    )
            elif mem0:
                def Q(v, js=js):
                    return all(
                        self.sat(b, j, v)
                        or any(
                            self.sat(b, l, v) and self.sat(a, l, v)
                            for l in range(j + 1, iota + 1)
                        )
                        for j in js
                    )
            else:
                def Q(v, js=js):
                    return all(
                        self.sat(b, j, v)
                        or any(self.sat(a, k, v) for k in range(j + 1, iota + 1))
                        for j in js
                    )
            if not self.qtable(n, Y, Q, R):
                self.fail(f, f"table for stamp {t} at time-point {iota} is wrong")

    def until_aux(self, f, n, a, I, b, aux, m):
        P = self.prog(f)
        if P + len(aux) != m:
            self.fail(f, f"progress {P} + {len(aux)} pending != {m}")
            return
        Y = fv(b)
        for i, (t, _, a2) in zip(range(P, m), aux):
            if t != self.p.tau(i):
                self.fail(f, f"entry for time-point {i} has stamp {t}")
                continue
            window = [j for j in range(i, m) if I.mem(self.p.tau(j) - t)]

            def Q(v, i=i, window=window):
                return any(
                    self.sat(b, j, v) and all(self.sat(a, k, v) for k in range(i, j))
                    for j in window
                )

            if not self.qtable(n, Y, Q, a2):
                self.fail(f, f"accumulated table for time-point {i} is wrong")

    def release_aux(self, f, n, a, I, b, mem0, aux, m):
        P = self.prog(f)
        if P + len(aux) != m:
            self.fail(f, f"progress {P} + {len(aux)} pending != {m}")
            return
        p = self.p
        Y = fv(b)
        iota = m - 1

        def cond(v, l):
            if mem0:
                return self.sat(b, l, v) and self.sat(a, l, v)
            return self.sat(a, l, v)

        for j, (t, L, R) in zip(range(P, m), aux):
            if t != p.tau(j):
                self.fail(f, f"entry for time-point {j} has stamp {t}")
                continue

            def QL(v, j=j):
                return any(cond(v, l) for l in range(j, iota + 1))

            if not self.qtable(n, Y, QL, L):
                self.fail(f, f"left table for time-point {j} is wrong")
            window = [k for k in range(j, iota + 1) if I.mem(p.tau(k) - t)]
            if not window:
                if R != T.unit_table(n):
                    self.fail(f, f"right table for time-point {j} should be the unit table")
                continue

            def QR(v, j=j, window=window):
                return all(
                    self.sat(b, k, v) or any(cond(v, l) for l in range(j, k))
                    for k in window
                )

            if not self.qtable(n, Y, QR, R):
                self.fail(f, f"right table for time-point {j} is wrong")


def check_state(p: TracePrefix, f: Formula, st: MonitorState) -> list[str]:
    """Violations of the structural invariant after consuming ``p``."""
    c = _Checker(p, f)
    if st.next_output != c.prog(f):
        c.fail(f, f"next_output {st.next_output} != progress {c.prog(f)}")
    c.walk(f, st.mf, st.n)
    return c.errors
