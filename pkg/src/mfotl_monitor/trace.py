"""Finite, time-stamped prefixes of event traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .formula import Value

Event = tuple[str, tuple[Value, ...]]
Database = frozenset  # frozenset[Event]


class MonotonicityViolation(ValueError):
    """A time-stamp smaller than its predecessor."""


class OutOfRange(IndexError):
    """Access to a time-point beyond the prefix."""


def database(events: Iterable[tuple[str, Iterable[Value]]] = ()) -> frozenset[Event]:
    return frozenset((name, tuple(args)) for name, args in events)


@dataclass(frozen=True)
class TracePrefix:
    entries: tuple[tuple[frozenset[Event], int], ...] = field(default=())

    def __post_init__(self):
        for (_, a), (_, b) in zip(self.entries, self.entries[1:]):
            if b < a:
                raise MonotonicityViolation(f"time-stamp {b} follows {a}")

    def __len__(self):
        return len(self.entries)

    def append(self, db: Iterable[Event], ts: int) -> "TracePrefix":
        if ts < 0:
            raise MonotonicityViolation(f"negative time-stamp {ts}")
        if self.entries and ts < self.entries[-1][1]:
            raise MonotonicityViolation(
                f"time-stamp {ts} follows {self.entries[-1][1]}"
            )
        return TracePrefix(self.entries + ((database(db), ts),))

    def gamma(self, i: int) -> frozenset[Event]:
        self._check(i)
        return self.entries[i][0]

    def tau(self, i: int) -> int:
        self._check(i)
        return self.entries[i][1]

    def _check(self, i: int):
        if not 0 <= i < len(self.entries):
            raise OutOfRange(f"time-point {i} outside prefix of length {len(self)}")

    def active_domain(self) -> set[Value]:
        return {v for db, _ in self.entries for _, args in db for v in args}

    @classmethod
    def from_entries(cls, entries: Iterable[tuple[Iterable[Event], int]]):
        p = cls()
        for db, ts in entries:
            p = p.append(db, ts)
        return p


def append(p: TracePrefix, db: Iterable[Event], ts: int) -> TracePrefix:
    return p.append(db, ts)


def gamma(p: TracePrefix, i: int) -> frozenset[Event]:
    return p.gamma(i)


def tau(p: TracePrefix, i: int) -> int:
    return p.tau(i)


def active_domain(p: TracePrefix) -> set[Value]:
    return p.active_domain()
