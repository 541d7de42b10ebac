"""Tables: finite sets of positional tuples with optional cells.

A tuple of width ``n`` stores ``None`` at positions that are not attributes
of its table.  Tables are plain ``frozenset``s of such tuples.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Iterable, Optional, Sequence

from .formula import Value

Tuple = tuple  # tuple[Optional[Value], ...]
Table = frozenset  # frozenset[Tuple]

EMPTY: frozenset = frozenset()


class LengthMismatch(ValueError):
    pass


def wf_tuple(n: int, X: Iterable[int], v: Sequence[Optional[Value]]) -> bool:
    X = set(X)
    return len(v) == n and all((v[i] is None) == (i not in X) for i in range(n))


def vtable(n: int, X: Iterable[int], R: Iterable[Tuple]) -> bool:
    X = set(X)
    return all(wf_tuple(n, X, v) for v in R)


def unit(n: int) -> Tuple:
    return (None,) * n


def unit_table(n: int) -> frozenset:
    return frozenset((unit(n),))


def join1(u: Tuple, v: Tuple) -> Optional[Tuple]:
    if len(u) != len(v):
        raise LengthMismatch(f"tuple widths {len(u)} and {len(v)}")
    out = []
    for a, b in zip(u, v):
        if a is None:
            out.append(b)
        elif b is None or a == b:
            out.append(a)
        else:
            return None
    return tuple(out)


def _width(R) -> Optional[int]:
    for v in R:
        return len(v)
    return None


def _check_widths(*tables):
    widths = {len(v) for R in tables for v in R}
    if len(widths) > 1:
        raise LengthMismatch(f"mixed tuple widths {sorted(widths)}")


def join(R1: Iterable[Tuple], R2: Iterable[Tuple]) -> frozenset:
    R1, R2 = frozenset(R1), frozenset(R2)
    _check_widths(R1, R2)
    out = set()
    for u in R1:
        for v in R2:
            w = join1(u, v)
            if w is not None:
                out.add(w)
    return frozenset(out)


def _attrs(v: Tuple) -> tuple[int, ...]:
    return tuple(i for i, c in enumerate(v) if c is not None)


def antijoin(R1: Iterable[Tuple], R2: Iterable[Tuple]) -> frozenset:
    """Rows of ``R1`` that agree with no row of ``R2`` on the latter's cells."""
    R1, R2 = frozenset(R1), frozenset(R2)
    _check_widths(R1, R2)
    if not R2:
        return R1
    # Group R2 by attribute set so well-formed R2 costs one lookup per row.
    groups: dict[tuple[int, ...], set[tuple]] = {}
    for v in R2:
        a = _attrs(v)
        groups.setdefault(a, set()).add(tuple(v[i] for i in a))
    return frozenset(
        u
        for u in R1
        if not any(tuple(u[i] for i in a) in keys for a, keys in groups.items())
    )


def union(R1: Iterable[Tuple], R2: Iterable[Tuple]) -> frozenset:
    R1, R2 = frozenset(R1), frozenset(R2)
    _check_widths(R1, R2)
    return R1 | R2


def eval_or(n: int, R1: Iterable[Tuple], R2: Iterable[Tuple]) -> frozenset:
    R1, R2 = frozenset(R1), frozenset(R2)
    _check_widths(R1, R2, unit_table(n))
    u = unit_table(n)
    if R1 == u or R2 == u:
        return u
    return R1 | R2


def big_join(Rs: Iterable[Iterable[Tuple]], n: int) -> frozenset:
    acc = unit_table(n)
    for R in Rs:
        acc = join(acc, R)
    return acc


def project(X: Iterable[int], v: Tuple) -> Tuple:
    X = set(X)
    return tuple(c if i in X else None for i, c in enumerate(v))


def wf_tuples(n: int, X: Iterable[int], universe: Iterable[Value]) -> Iterable[Tuple]:
    """All well-formed tuples of width ``n`` over ``X`` with cells from ``universe``."""
    X = sorted(set(X))
    universe = list(universe)
    for vals in product(universe, repeat=len(X)):
        v = [None] * n
        for i, a in zip(X, vals):
            v[i] = a
        yield tuple(v)


def all_tuples(n: int, universe: Iterable[Value]) -> Iterable[Tuple]:
    """Every width-``n`` tuple whose cells are ``None`` or from ``universe``."""
    return product([None, *universe], repeat=n)


def qtable(
    n: int,
    X: Iterable[int],
    P: Callable[[Tuple], bool],
    Q: Callable[[Tuple], bool],
    R: Iterable[Tuple],
    universe: Iterable[Value],
) -> bool:
    """Check ``qtable n X P Q R`` with the valuation quantifier over ``universe``.

    Once ``vtable n X R`` holds, a tuple that is not well-formed for ``X`` is
    outside ``R`` and makes the right-hand side false, so only well-formed
    candidates (over ``universe``, plus the rows of ``R``) need checking.
    """
    X = set(X)
    R = frozenset(R)
    if not vtable(n, X, R):
        return False
    for v in set(wf_tuples(n, X, universe)) | R:
        if P(v) and ((v in R) != bool(Q(v))):
            return False
    return True
