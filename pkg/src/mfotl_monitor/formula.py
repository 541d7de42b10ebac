"""Abstract syntax of metric first-order temporal logic.

Variables are De Bruijn indices: ``Exists`` binds index 0 of its body and
every other free index of the body is shifted down by one.  Domain values
are plain ``int`` or ``str`` atoms and are only ever compared for equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Union

Value = Union[int, str]


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"negative variable index {self.index}")


@dataclass(frozen=True)
class Const:
    value: Value


Term = Union[Var, Const]


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` of natural numbers; ``hi=None`` is infinity."""

    lo: int
    hi: Optional[int] = None

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError(f"interval lower bound {self.lo} is negative")
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo},{self.hi}]")

    @classmethod
    def half_open(cls, lo: int, hi: Optional[int]) -> "Interval":
        """``[lo, hi)`` normalized to the closed form ``[lo, hi - 1]``."""
        return cls(lo, None if hi is None else hi - 1)

    def mem_l(self, x: int) -> bool:
        return self.lo <= x

    def mem_r(self, x: int) -> bool:
        return self.hi is None or x <= self.hi

    def mem(self, x: int) -> bool:
        return self.mem_l(x) and self.mem_r(x)

    @property
    def bounded(self) -> bool:
        return self.hi is not None

    def __str__(self):
        return f"[{self.lo},{'*)' if self.hi is None else str(self.hi) + ']'}"


def mem(interval: Interval, x: int) -> bool:
    return interval.mem(x)


def mem_l(interval: Interval, x: int) -> bool:
    return interval.mem_l(x)


def mem_r(interval: Interval, x: int) -> bool:
    return interval.mem_r(x)


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Pred(Formula):
    name: str
    args: tuple[Term, ...]

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    body: Formula


@dataclass(frozen=True)
class Prev(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True)
class Next(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    interval: Interval
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    interval: Interval
    right: Formula


@dataclass(frozen=True)
class Trigger(Formula):
    left: Formula
    interval: Interval
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    interval: Interval
    right: Formula


BINARY_TEMPORAL = (Since, Until, Trigger, Release)


def fv_trm(t: Term) -> frozenset[int]:
    if isinstance(t, Var):
        return frozenset((t.index,))
    return frozenset()


@lru_cache(maxsize=65536)
def fv(f: Formula) -> frozenset[int]:
    """Free variables of ``f``."""
    match f:
        case Pred(_, args):
            return frozenset().union(*(fv_trm(t) for t in args))
        case Eq(t1, t2):
            return fv_trm(t1) | fv_trm(t2)
        case Neg(a) | Prev(_, a) | Next(_, a):
            return fv(a)
        case And(a, b) | Or(a, b):
            return fv(a) | fv(b)
        case Exists(body):
            return frozenset(x - 1 for x in fv(body) if x != 0)
        case Since(a, _, b) | Until(a, _, b) | Trigger(a, _, b) | Release(a, _, b):
            return fv(a) | fv(b)
    raise TypeError(f"not a formula: {f!r}")


def nfv(f: Formula) -> int:
    return max((x + 1 for x in fv(f)), default=0)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, ``f`` first."""
    yield f
    match f:
        case Neg(a) | Exists(a) | Prev(_, a) | Next(_, a):
            yield from subformulas(a)
        case And(a, b) | Or(a, b):
            yield from subformulas(a)
            yield from subformulas(b)
        case Since(a, _, b) | Until(a, _, b) | Trigger(a, _, b) | Release(a, _, b):
            yield from subformulas(a)
            yield from subformulas(b)


def constants(f: Formula) -> set[Value]:
    out: set[Value] = set()
    for g in subformulas(f):
        if isinstance(g, Pred):
            out.update(t.value for t in g.args if isinstance(t, Const))
        elif isinstance(g, Eq):
            out.update(t.value for t in (g.left, g.right) if isinstance(t, Const))
    return out


def max_nfv(f: Formula) -> int:
    """Largest ``nfv`` over all subformulas of ``f``."""
    return max(nfv(g) for g in subformulas(f))


def future_bounded(f: Formula) -> bool:
    """True iff every ``Until`` and ``Release`` has a finite right bound."""
    return all(
        g.interval.bounded for g in subformulas(f) if isinstance(g, (Until, Release))
    )


def is_false_eq(f: Formula) -> bool:
    """``Neg(Eq(t, t))``: the constantly false formula over ``fv t``."""
    return isinstance(f, Neg) and isinstance(f.arg, Eq) and f.arg.left == f.arg.right
