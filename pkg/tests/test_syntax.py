import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfotl_monitor.formula import (
    And,
    Const,
    Eq,
    Exists,
    Interval,
    Neg,
    Pred,
    Release,
    Since,
    Trigger,
    Until,
    Var,
)
from mfotl_monitor.syntax import (
    FormulaSyntaxError,
    LogParseError,
    UnboundName,
    default_names,
    format_formula,
    format_log_line,
    parse_formula,
    parse_formula_with_names,
    parse_log,
    parse_log_line,
)

from cases import BEST, BEST_TEXT, PIRACY_LOG, PIRACY_TRACE, PIRATED, PIRATED_TEXT, QUALITY_LOG, QUALITY_TRACE
from randgen import any_formula, random_db

x, y = Var(0), Var(1)


class TestParseFormula:
    def test_since(self):
        assert parse_formula("p(x) SINCE[0,5] q(x)") == Since(
            Pred("p", (x,)), Interval(0, 5), Pred("q", (x,))
        )

    def test_historically(self):
        assert parse_formula("HISTORICALLY[1,2] p(x)") == Trigger(
            Neg(Eq(x, x)), Interval(1, 2), Pred("p", (x,))
        )

    def test_half_open_release(self):
        f = parse_formula("off_route(x) RELEASE[0,2) no_sign(x)")
        assert f == Release(Pred("off_route", (x,)), Interval(0, 1), Pred("no_sign", (x,)))

    def test_worked_formulas(self):
        assert parse_formula(PIRATED_TEXT) == PIRATED
        best = parse_formula(BEST_TEXT)
        # conjunction is left-nested, matching the hand-built formula
        assert best == BEST

    def test_free_variable_order(self):
        assert parse_formula("q(y, x)") == Pred("q", (x, y))
        assert parse_formula("q(y, x)", free_vars=["x", "y"]) == Pred("q", (y, x))
        with pytest.raises(UnboundName):
            parse_formula("p(z)", free_vars=["x"])

    def test_exists_binds_innermost_first(self):
        f = parse_formula("EXISTS y. q(x, y)")
        assert f == Exists(Pred("q", (Var(1), Var(0))))
        assert parse_formula("EXISTS a, b. q(a, b)") == Exists(Exists(Pred("q", (Var(1), Var(0)))))

    def test_sugar(self):
        top = Eq(Const(0), Const(0))
        assert parse_formula("ONCE p(x)") == Since(top, Interval(0, None), Pred("p", (x,)))
        assert parse_formula("EVENTUALLY[0,3] p(x)") == Until(top, Interval(0, 3), Pred("p", (x,)))
        assert parse_formula("TRUE") == top
        assert parse_formula("FALSE") == Neg(top)

    def test_no_sugar(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("ONCE p(x)", sugar=False)

    def test_constants(self):
        assert parse_formula('p("a") AND x = 3') == And(Pred("p", (Const("a"),)), Eq(x, Const(3)))

    @pytest.mark.parametrize(
        "text", ["p(x", "p(x) AND", "p(x) SINCE[2,1] q(x)", "p(x) SINCE[1,1) q(x)", "NOT", "x"]
    )
    def test_errors(self, text):
        with pytest.raises(FormulaSyntaxError):
            parse_formula(text)


@settings(max_examples=400, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_print_parse_roundtrip(seed):
    f = any_formula(random.Random(seed), 5)
    names = default_names(f)
    assert parse_formula(format_formula(f, names), free_vars=names, sugar=False) == f


def test_names_roundtrip():
    f, names = parse_formula_with_names("EXISTS y. q(b, y) AND p(a)")
    assert names == ["b", "a"]
    assert parse_formula(format_formula(f, names), free_vars=names) == f


class TestLogs:
    def test_line(self):
        assert parse_log_line("@0 p1(0) p1(1);") == (frozenset({("p1", (0,)), ("p1", (1,))}), 0)

    def test_piracy_row(self):
        assert parse_log_line("@3 off_route(1) no_sign(2) sign(3);") == PIRACY_TRACE[3]

    def test_empty_time_point(self):
        assert parse_log_line("@5;") == (frozenset(), 5)

    def test_blank_and_comment(self):
        assert parse_log_line("   ") is None
        assert parse_log_line("# note") is None

    def test_values(self):
        db, _ = parse_log_line('@1 e("a b", c, -2) f();')
        assert db == {("e", ("a b", "c", -2)), ("f", ())}

    def test_whole_logs(self):
        assert list(parse_log(io.StringIO(QUALITY_LOG))) == QUALITY_TRACE
        assert list(parse_log(PIRACY_LOG.splitlines())) == PIRACY_TRACE

    @pytest.mark.parametrize("line", ["0 p(1);", "@x p(1);", "@1 p(1", "@1 p(1); q(2)", "@-1;"])
    def test_errors(self, line):
        with pytest.raises(LogParseError):
            parse_log_line(line)

    def test_error_line_number(self):
        with pytest.raises(LogParseError) as e:
            list(parse_log(["@0;", "", "@1 p("]))
        assert e.value.line == 3

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(0, 1000))
    def test_format_roundtrip(self, seed, ts):
        db = random_db(random.Random(seed), 0.3)
        assert parse_log_line(format_log_line(db, ts)) == (db, ts)
