"""Concrete syntax for formulas and event logs.

Formula grammar, loosest binding first::

    formula  := disj [ (SINCE | UNTIL | TRIGGER | RELEASE) [interval] formula ]
    disj     := conj { OR conj }
    conj     := unary { AND unary }
    unary    := NOT unary
              | (PREV | NEXT | ONCE | EVENTUALLY | HISTORICALLY | GLOBALLY) [interval] unary
              | EXISTS name {, name} . formula
              | atom
    atom     := TRUE | FALSE | name ( [term {, term}] ) | term = term | ( formula )
    term     := name | integer | "string"
    interval := [ int , int ] | [ int , int ) | [ int , * )

Free variable names receive De Bruijn indices by first occurrence.  The
body of ``EXISTS`` extends as far right as possible.

Log lines look like ``@5 p(1, "a") q();`` with integer, quoted or bare-word
arguments; ``@5;`` is an empty database.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

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
    fv,
    nfv,
)
from .trace import database


class FormulaSyntaxError(SyntaxError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos
        self.text = text


class UnboundName(FormulaSyntaxError):
    pass


class LogParseError(ValueError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


TRUE = Eq(Const(0), Const(0))
FALSE = Neg(TRUE)

CORE_KEYWORDS = {
    "NOT", "AND", "OR", "EXISTS", "PREV", "NEXT",
    "SINCE", "UNTIL", "TRIGGER", "RELEASE",
}
SUGAR_KEYWORDS = {"TRUE", "FALSE", "ONCE", "EVENTUALLY", "HISTORICALLY", "GLOBALLY"}
BINARY = {"SINCE": Since, "UNTIL": Until, "TRIGGER": Trigger, "RELEASE": Release}
UNARY = {"PREV", "NEXT", "ONCE", "EVENTUALLY", "HISTORICALLY", "GLOBALLY"}

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<str>"(?:[^"\\]|\\.)*")
      | (?P<int>-?\d+)
      | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
      | (?P<sym>[()\[\],.=*])
    )""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    while True:
        while i < len(text) and text[i].isspace():
            i += 1
        if i >= len(text):
            break
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i, text)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        i = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


# Surface trees are tuples tagged by their first element; names stay names
# until resolution.


class _Parser:
    def __init__(self, text: str, sugar: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.k = 0
        self.sugar = sugar

    @property
    def tok(self) -> _Tok:
        return self.toks[self.k]

    def error(self, msg: str):
        raise FormulaSyntaxError(msg, self.tok.pos, self.text)

    def is_kw(self, *words) -> bool:
        return self.tok.kind == "name" and self.tok.text in words

    def keyword(self) -> Optional[str]:
        if self.tok.kind != "name":
            return None
        w = self.tok.text
        if w in CORE_KEYWORDS or (self.sugar and w in SUGAR_KEYWORDS):
            return w
        if not self.sugar and w in SUGAR_KEYWORDS:
            self.error(f"{w} is not core syntax")
        return None

    def eat(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind not in ("sym", "name"):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.k += 1
        return t

    def parse(self):
        f = self.formula()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return f

    def formula(self):
        left = self.disj()
        kw = self.keyword()
        if kw in BINARY:
            self.k += 1
            ivl = self.interval_opt()
            right = self.formula()
            return ("bin", kw, left, ivl, right)
        return left

    def disj(self):
        f = self.conj()
        while self.keyword() == "OR":
            self.k += 1
            f = ("or", f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.keyword() == "AND":
            self.k += 1
            f = ("and", f, self.unary())
        return f

    def unary(self):
        kw = self.keyword()
        if kw == "NOT":
            self.k += 1
            return ("not", self.unary())
        if kw in UNARY:
            self.k += 1
            ivl = self.interval_opt()
            return ("un", kw, ivl, self.unary())
        if kw == "EXISTS":
            self.k += 1
            names = [self.name()]
            while self.tok.text == "," and self.tok.kind == "sym":
                self.k += 1
                names.append(self.name())
            self.eat(".")
            body = self.formula()
            for nm in reversed(names):
                body = ("exists", nm, body)
            return body
        return self.atom()

    def name(self) -> str:
        if self.tok.kind != "name" or self.keyword():
            self.error("expected a variable name")
        t = self.tok.text
        self.k += 1
        return t

    def atom(self):
        kw = self.keyword()
        if kw in ("TRUE", "FALSE"):
            self.k += 1
            return ("const", kw)
        if kw is not None:
            self.error(f"unexpected keyword {kw}")
        if self.tok.kind == "sym" and self.tok.text == "(":
            self.k += 1
            f = self.formula()
            self.eat(")")
            return f
        if self.tok.kind == "name" and self.toks[self.k + 1].text == "(":
            name = self.tok.text
            self.k += 2
            args = []
            if self.tok.text != ")":
                args.append(self.term())
                while self.tok.text == "," and self.tok.kind == "sym":
                    self.k += 1
                    args.append(self.term())
            self.eat(")")
            return ("pred", name, args)
        left = self.term()
        self.eat("=")
        return ("eq", left, self.term())

    def term(self):
        t = self.tok
        if t.kind == "int":
            self.k += 1
            return ("c", int(t.text))
        if t.kind == "str":
            self.k += 1
            return ("c", json.loads(t.text))
        if t.kind == "name" and not self.keyword():
            self.k += 1
            return ("v", t.text)
        self.error("expected a term")

    def interval_opt(self) -> Interval:
        if not (self.tok.kind == "sym" and self.tok.text == "["):
            return Interval(0, None)
        start = self.tok.pos
        self.k += 1
        lo = self.nat()
        self.eat(",")
        if self.tok.text == "*":
            self.k += 1
            self.eat(")")
            return Interval(lo, None)
        hi = self.nat()
        if self.tok.text == "]":
            self.k += 1
            closed = True
        elif self.tok.text == ")":
            self.k += 1
            closed = False
        else:
            self.error("expected ']' or ')'")
        try:
            return Interval(lo, hi) if closed else Interval.half_open(lo, hi)
        except ValueError as e:
            raise FormulaSyntaxError(str(e), start, self.text) from None

    def nat(self) -> int:
        if self.tok.kind != "int" or self.tok.text.startswith("-"):
            self.error("expected a natural number")
        v = int(self.tok.text)
        self.k += 1
        return v


def _free_names(s, bound=(), out=None) -> list[str]:
    out = [] if out is None else out
    tag = s[0]
    if tag == "pred":
        for t in s[2]:
            _term_names(t, bound, out)
    elif tag == "eq":
        _term_names(s[1], bound, out)
        _term_names(s[2], bound, out)
    elif tag == "not":
        _free_names(s[1], bound, out)
    elif tag in ("and", "or"):
        _free_names(s[1], bound, out)
        _free_names(s[2], bound, out)
    elif tag == "exists":
        _free_names(s[2], (s[1], *bound), out)
    elif tag == "un":
        _free_names(s[3], bound, out)
    elif tag == "bin":
        _free_names(s[2], bound, out)
        _free_names(s[4], bound, out)
    return out


def _term_names(t, bound, out):
    if t[0] == "v" and t[1] not in bound and t[1] not in out:
        out.append(t[1])


def _bottom(f: Formula) -> Formula:
    xs = sorted(fv(f))
    if not xs:
        return FALSE
    out: Formula = Neg(Eq(Var(xs[0]), Var(xs[0])))
    for x in xs[1:]:
        out = And(out, Neg(Eq(Var(x), Var(x))))
    return out


def _resolve(s, env: list[str]) -> Formula:
    tag = s[0]
    if tag == "const":
        return TRUE if s[1] == "TRUE" else FALSE
    if tag == "pred":
        return Pred(s[1], tuple(_term(t, env) for t in s[2]))
    if tag == "eq":
        return Eq(_term(s[1], env), _term(s[2], env))
    if tag == "not":
        return Neg(_resolve(s[1], env))
    if tag == "and":
        return And(_resolve(s[1], env), _resolve(s[2], env))
    if tag == "or":
        return Or(_resolve(s[1], env), _resolve(s[2], env))
    if tag == "exists":
        return Exists(_resolve(s[2], [s[1], *env]))
    if tag == "un":
        _, kw, ivl, arg = s
        a = _resolve(arg, env)
        if kw == "PREV":
            return Prev(ivl, a)
        if kw == "NEXT":
            return Next(ivl, a)
        if kw == "ONCE":
            return Since(TRUE, ivl, a)
        if kw == "EVENTUALLY":
            return Until(TRUE, ivl, a)
        if kw == "HISTORICALLY":
            return Trigger(_bottom(a), ivl, a)
        return Release(_bottom(a), ivl, a)
    _, kw, left, ivl, right = s
    return BINARY[kw](_resolve(left, env), ivl, _resolve(right, env))


def _term(t, env: list[str]) -> Term:
    if t[0] == "c":
        return Const(t[1])
    return Var(env.index(t[1]))


def parse_formula(
    text: str, free_vars: Optional[Sequence[str]] = None, sugar: bool = True
) -> Formula:
    """Parse ``text`` into De Bruijn form.

    ``free_vars`` pins the index of each free name; without it, free names
    are numbered by first occurrence.
    """
    f, _ = parse_formula_with_names(text, free_vars, sugar)
    return f


def parse_formula_with_names(
    text: str, free_vars: Optional[Sequence[str]] = None, sugar: bool = True
) -> tuple[Formula, list[str]]:
    s = _Parser(text, sugar).parse()
    names = _free_names(s)
    if free_vars is None:
        env = names
    else:
        env = list(free_vars)
        missing = [x for x in names if x not in env]
        if missing:
            raise UnboundName(f"free variable {missing[0]!r} not declared", 0, text)
    return _resolve(s, env), env


# -- printing -----------------------------------------------------------------


def format_value(v) -> str:
    if isinstance(v, str):
        return json.dumps(v)
    return str(v)


def _ivl(I: Interval) -> str:
    return f"[{I.lo},*)" if I.hi is None else f"[{I.lo},{I.hi}]"


def default_names(f: Formula) -> list[str]:
    return [f"x{i}" for i in range(nfv(f))]


def format_formula(f: Formula, names: Optional[Sequence[str]] = None) -> str:
    """Core-syntax rendering; ``parse_formula(s, names)`` recovers ``f``."""
    env = list(default_names(f) if names is None else names)
    return _fmt(f, env, 0)


def _fmt_term(t: Term, env: list[str]) -> str:
    if isinstance(t, Const):
        return format_value(t.value)
    return env[t.index]


def _wrap(f: Formula, env, depth) -> str:
    s = _fmt(f, env, depth)
    return s if isinstance(f, (Pred, Eq)) else f"({s})"


def _fmt(f: Formula, env: list[str], depth: int) -> str:
    match f:
        case Pred(name, args):
            return f"{name}({', '.join(_fmt_term(t, env) for t in args)})"
        case Eq(t1, t2):
            return f"{_fmt_term(t1, env)} = {_fmt_term(t2, env)}"
        case Neg(a):
            return f"NOT {_wrap(a, env, depth)}"
        case And(a, b):
            return f"{_wrap(a, env, depth)} AND {_wrap(b, env, depth)}"
        case Or(a, b):
            return f"{_wrap(a, env, depth)} OR {_wrap(b, env, depth)}"
        case Exists(body):
            y = f"y{depth}"
            while y in env:
                y += "'"
            return f"EXISTS {y}. {_fmt(body, [y, *env], depth + 1)}"
        case Prev(I, a):
            return f"PREV{_ivl(I)} {_wrap(a, env, depth)}"
        case Next(I, a):
            return f"NEXT{_ivl(I)} {_wrap(a, env, depth)}"
        case Since(a, I, b) | Until(a, I, b) | Trigger(a, I, b) | Release(a, I, b):
            kw = type(f).__name__.upper()
            return f"{_wrap(a, env, depth)} {kw}{_ivl(I)} {_wrap(b, env, depth)}"
    raise TypeError(f"not a formula: {f!r}")


# -- logs -----------------------------------------------------------------------

_LOG_TOKEN = re.compile(
    r"""\s*(?:
        (?P<at>@)
      | (?P<str>"(?:[^"\\]|\\.)*")
      | (?P<int>-?\d+)(?![A-Za-z_])
      | (?P<name>[A-Za-z_0-9][A-Za-z0-9_'.:-]*)
      | (?P<sym>[(),;])
    )""",
    re.VERBOSE,
)


def _log_tokens(line: str, lineno: int) -> list[tuple[str, str]]:
    out = []
    i = 0
    while True:
        while i < len(line) and line[i].isspace():
            i += 1
        if i >= len(line):
            return out
        m = _LOG_TOKEN.match(line, i)
        if not m or m.end() == i:
            raise LogParseError(f"unexpected character {line[i]!r}", lineno)
        out.append((m.lastgroup, m.group(m.lastgroup)))
        i = m.end()


def parse_log_line(line: str, lineno: int = 1):
    """Parse one log line; returns ``None`` for blank and comment lines."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    toks = _log_tokens(stripped, lineno)
    k = 0

    def expect(kind, text=None):
        nonlocal k
        if k >= len(toks) or toks[k][0] != kind or (text and toks[k][1] != text):
            got = toks[k][1] if k < len(toks) else "end of line"
            raise LogParseError(f"expected {text or kind}, found {got!r}", lineno)
        k += 1
        return toks[k - 1][1]

    expect("at")
    ts_text = expect("int")
    ts = int(ts_text)
    if ts < 0:
        raise LogParseError("negative time-stamp", lineno)
    events = []
    while k < len(toks) and toks[k] != ("sym", ";"):
        name = expect("name")
        expect("sym", "(")
        args = []
        if k < len(toks) and toks[k] != ("sym", ")"):
            args.append(_log_value(toks[k], lineno))
            k += 1
            while k < len(toks) and toks[k] == ("sym", ","):
                k += 1
                if k >= len(toks):
                    break
                args.append(_log_value(toks[k], lineno))
                k += 1
        expect("sym", ")")
        events.append((name, tuple(args)))
    if k < len(toks):
        expect("sym", ";")
    if k != len(toks):
        raise LogParseError(f"trailing input {toks[k][1]!r}", lineno)
    return database(events), ts


def _log_value(tok: tuple[str, str], lineno: int):
    kind, text = tok
    if kind == "int":
        return int(text)
    if kind == "str":
        return json.loads(text)
    if kind == "name":
        return text
    raise LogParseError(f"expected a value, found {text!r}", lineno)


def parse_log(lines: Iterable[str]) -> Iterator[tuple[frozenset, int]]:
    """Yield ``(database, ts)`` per non-blank line; monotonicity is the
    consumer's concern."""
    for lineno, line in enumerate(lines, 1):
        entry = parse_log_line(line, lineno)
        if entry is not None:
            yield entry


def format_log_line(db, ts: int) -> str:
    events = sorted(db, key=lambda e: (e[0], [(isinstance(v, str), v) for v in e[1]]))
    body = " ".join(
        f"{name}({', '.join(format_value(v) for v in args)})" for name, args in events
    )
    return f"@{ts} {body};" if body else f"@{ts};"
