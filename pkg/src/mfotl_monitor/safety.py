"""Safe sets of free variables and the baseline safety predicate.

``ssfv`` returns a family of variable sets; a formula is safe iff the family
is non-empty.  Clauses are tried in a fixed order because their guards
overlap.  ``safe_formula`` is the older, stricter predicate; it is kept to
compare the two fragments.
"""

from __future__ import annotations

from functools import lru_cache

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
    Trigger,
    Until,
    Var,
    fv,
    fv_trm,
)

VarSet = frozenset  # frozenset[int]
Family = frozenset  # frozenset[VarSet]

EMPTY_SET: frozenset = frozenset()


def family(*sets) -> frozenset:
    return frozenset(frozenset(s) for s in sets)


def pairwise_union(A, B) -> frozenset:
    return frozenset(a | b for a in A for b in B)


def is_constraint(f: Formula) -> bool:
    return isinstance(f, Eq) or (isinstance(f, Neg) and isinstance(f.arg, Eq))


def safe_assignment(X, f: Formula) -> bool:
    X = frozenset(X)
    if not isinstance(f, Eq):
        return False
    t1, t2 = f.left, f.right
    if isinstance(t1, Var) and isinstance(t2, Var):
        return (t1.index not in X) == (t2.index in X)
    if isinstance(t1, Var):
        return t1.index not in X and fv_trm(t2) <= X
    if isinstance(t2, Var):
        return t2.index not in X and fv_trm(t1) <= X
    return False


def _since_like(A, B, X, Y, alpha: Formula, until: bool) -> frozenset:
    if B != family(Y):
        return EMPTY_SET
    if A and X <= Y:
        return family(Y)
    if isinstance(alpha, Neg):
        A1 = ssfv(alpha.arg)
        ok = (X <= Y and A1 == family(X)) if until else (bool(A1) and X <= Y)
        return family(Y) if ok else EMPTY_SET
    return EMPTY_SET


def _dual(A, B, X, Y, alpha: Formula, interval: Interval) -> frozenset:
    if interval.mem(0):
        return _since_like(A, B, X, Y, alpha, until=False)
    if X == Y and A == family(X) and B == family(Y):
        return family((), X)
    return EMPTY_SET


@lru_cache(maxsize=65536)
def ssfv(f: Formula) -> frozenset:
    """Safe sets of free variables of ``f``."""
    match f:
        case Pred():
            return family(fv(f))
        case Eq(Var(x), t):
            # Var = Var lands here, so it is never an assignment on its own.
            return family({x}) if not fv_trm(t) else EMPTY_SET
        case Eq(t, Var(x)):
            return family({x}) if not fv_trm(t) else EMPTY_SET
        case Eq():
            return family(())
        case Neg(Eq(t1, t2)):
            X = fv(f)
            return family(X) if t1 == t2 or not X else EMPTY_SET
        case And(a, b):
            A, B = ssfv(a), ssfv(b)
            if not A:
                return EMPTY_SET
            if B:
                return pairwise_union(A, B)
            if all(safe_assignment(X, b) for X in A):
                return frozenset(X | fv(b) for X in A)
            if is_constraint(b) and all(fv(b) <= X for X in A):
                return A
            if isinstance(b, Neg):
                B1 = ssfv(b.arg)
                if B1 and all(Y <= X for Y in B1 for X in A):
                    return A
            return EMPTY_SET
        case Or(a, b):
            A, B, X, Y = ssfv(a), ssfv(b), fv(a), fv(b)
            if not (A and B):
                return EMPTY_SET
            if X == Y and A <= family((), X) and B <= family((), Y):
                AB = pairwise_union(A, B)
                return family(()) | AB if EMPTY_SET in A or EMPTY_SET in B else AB
            return A | B if not X or not Y else EMPTY_SET
        case Exists(body):
            return frozenset(
                frozenset(x - 1 for x in S if x != 0) for S in ssfv(body)
            )
        case Prev(_, a) | Next(_, a):
            return ssfv(a)
        case Since(a, _, b):
            return _since_like(ssfv(a), ssfv(b), fv(a), fv(b), a, until=False)
        case Until(a, _, b):
            return _since_like(ssfv(a), ssfv(b), fv(a), fv(b), a, until=True)
        case Trigger(a, I, b) | Release(a, I, b):
            return _dual(ssfv(a), ssfv(b), fv(a), fv(b), a, I)
        case Neg(a):
            return family(()) if ssfv(a) == family(()) else EMPTY_SET
    raise TypeError(f"not a formula: {f!r}")


def issafe(f: Formula) -> bool:
    return bool(ssfv(f))


def safe_dual(conjoined: bool, alpha: Formula, interval: Interval, beta: Formula) -> bool:
    if interval.mem(0):
        return (
            safe_formula(beta)
            and fv(alpha) <= fv(beta)
            and (
                safe_formula(alpha)
                or (isinstance(alpha, Neg) and safe_formula(alpha.arg))
            )
        )
    return conjoined and safe_formula(alpha) and safe_formula(beta) and fv(alpha) == fv(beta)


@lru_cache(maxsize=65536)
def safe_formula(f: Formula) -> bool:
    """The stricter baseline safety predicate."""
    match f:
        case Eq(t1, t2):
            return (
                isinstance(t1, Const) and isinstance(t2, (Const, Var))
            ) or (isinstance(t1, Var) and isinstance(t2, Const))
        case Neg(Eq(Var(x), Var(y))):
            return x == y
        case Pred():
            return True
        case Neg(a):
            return not fv(a) and safe_formula(a)
        case Or(a, b):
            return fv(a) == fv(b) and safe_formula(a) and safe_formula(b)
        case And(a, b):
            if not safe_formula(a):
                return False
            if safe_assignment(fv(a), b) or safe_formula(b):
                return True
            if not fv(b) <= fv(a):
                return False
            if is_constraint(b):
                return True
            match b:
                case Neg(b1):
                    return safe_formula(b1)
                case Trigger(a1, I, b1) | Release(a1, I, b1):
                    return safe_dual(True, a1, I, b1)
            return False
        case Exists(a) | Prev(_, a) | Next(_, a):
            return safe_formula(a)
        case Since(a, _, b) | Until(a, _, b):
            return (
                safe_formula(b)
                and fv(a) <= fv(b)
                and (safe_formula(a) or (isinstance(a, Neg) and safe_formula(a.arg)))
            )
        case Trigger(a, I, b) | Release(a, I, b):
            return safe_dual(False, a, I, b)
    raise TypeError(f"not a formula: {f!r}")
