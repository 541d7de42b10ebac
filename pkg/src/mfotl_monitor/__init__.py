"""Monitoring metric first-order temporal logic with trigger and release."""

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
    nfv,
)
from .monitor import MonitorState, UnboundedFuture, minit, mstep, mstep_tables, progress, run
from .oracle import Oracle, UndeterminedTimePoint, UnsafeFormula
from .safety import issafe, safe_formula, ssfv
from .syntax import format_formula, parse_formula, parse_log
from .trace import MonotonicityViolation, TracePrefix

__all__ = [
    "And", "Const", "Eq", "Exists", "Formula", "Interval", "Neg", "Next", "Or",
    "Pred", "Prev", "Release", "Since", "Trigger", "Until", "Var",
    "fv", "nfv", "issafe", "safe_formula", "ssfv",
    "MonitorState", "minit", "mstep", "mstep_tables", "progress", "run",
    "Oracle", "UndeterminedTimePoint", "UnsafeFormula", "UnboundedFuture",
    "MonotonicityViolation", "TracePrefix",
    "format_formula", "parse_formula", "parse_log",
]
