"""Acceptance criteria, one test each.

Each test appends a PASS/FAIL line to ``RESULTS``; ``conftest.py`` prints
them at the end of the session.  Running this file directly prints them too.
"""

from __future__ import annotations

import time

import pytest

from mfotl_monitor.formula import Eq, Interval, Neg, Pred, Trigger, Var
from mfotl_monitor.monitor import MRelease, minit, mstep
from mfotl_monitor.safety import issafe, safe_formula

from cases import BEST, PIRACY_TRACE, PIRATED, QUALITY_TRACE
from suites import coincidence, differential_run, duality, fragment

RESULTS: list[str] = []

FRAGMENT_FORMULAS = 10_000
DIFFERENTIAL_RUNS = 2_000
DUALITY_INSTANCES = 1_000
COINCIDENCE_INSTANCES = 1_000


def report(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS.append(line)
    print(line)


def _replay(f, trace):
    st = minit(f)
    outs, states = [], []
    for entry in trace:
        out, st = mstep(entry, st)
        outs.append(out)
        states.append(st)
    return outs, states


def test_c1_quality_replay():
    t0 = time.perf_counter()
    outs, states = _replay(BEST, QUALITY_TRACE)
    elapsed = time.perf_counter() - t0
    st = states[-1]
    ok_out = outs[:6] == [set()] * 6 and outs[6] == {(0, (0,)), (0, (3,))}
    ok_state = st.next_output == 1 and st.n == 1
    ok = ok_out and ok_state and elapsed < 1
    report("C1 quality replay", ok, f"outputs={'ok' if ok_out else outs} next_output={st.next_output} n={st.n} {elapsed:.3f}s")
    assert ok


def test_c2_piracy_replay():
    t0 = time.perf_counter()
    outs, states = _replay(PIRATED, PIRACY_TRACE)
    elapsed = time.perf_counter() - t0
    mf = states[3].mf
    ok_out = outs[3] == {(0, (1,)), (0, (2,))} and outs[4] == {(1, (2,))}
    ok_shape = isinstance(mf, MRelease) and len(mf.aux) == 3 and states[3].next_output == 1
    ok = ok_out and ok_shape and elapsed < 1
    report(
        "C2 piracy replay",
        ok,
        f"step3={sorted(outs[3])} step4={sorted(outs[4])} pending={len(mf.aux)} {elapsed:.3f}s",
    )
    assert ok


def test_c3_fragment_properties():
    t0 = time.perf_counter()
    errs = [e for seed in range(FRAGMENT_FORMULAS) for e in fragment(seed)]
    x = Var(0)
    witness = Trigger(Neg(Eq(x, x)), Interval(1, 2), Pred("p", (x,)))
    ok_witness = issafe(witness) and not safe_formula(witness)
    elapsed = time.perf_counter() - t0
    ok = not errs and ok_witness and elapsed < 30
    report(
        "C3 fragment properties",
        ok,
        f"{FRAGMENT_FORMULAS} formulas, {len(errs)} counterexamples, witness={'ok' if ok_witness else 'bad'} {elapsed:.1f}s",
    )
    assert ok, errs[:5]


@pytest.fixture(scope="module")
def differential_runs():
    t0 = time.perf_counter()
    diff, inv, steps = [], [], 0
    for seed in range(DIFFERENTIAL_RUNS):
        d, i, n = differential_run(seed, invariants=True)
        diff += d
        inv += i
        steps += n
    return diff, inv, steps, time.perf_counter() - t0


def test_c4_differential(differential_runs):
    diff, _, steps, elapsed = differential_runs
    ok = not diff and elapsed < 300
    report(
        "C4 differential vs oracle",
        ok,
        f"{DIFFERENTIAL_RUNS} runs, {steps} steps, {len(diff)} mismatches, {elapsed:.1f}s (includes invariant checks)",
    )
    assert ok, diff[:5]


def test_c5_duality_and_coincidence():
    t0 = time.perf_counter()
    dual = [e for s in range(DUALITY_INSTANCES) for e in duality(s)]
    coin = [e for s in range(COINCIDENCE_INSTANCES) for e in coincidence(s)]
    elapsed = time.perf_counter() - t0
    ok = not dual and not coin and elapsed < 60
    report(
        "C5 duality and coincidence",
        ok,
        f"{DUALITY_INSTANCES}+{COINCIDENCE_INSTANCES} instances, {len(dual)}+{len(coin)} failures, {elapsed:.1f}s",
    )
    assert ok, (dual + coin)[:5]


def test_c6_structural_invariants(differential_runs):
    _, inv, steps, _ = differential_runs
    ok = not inv
    report("C6 structural invariants", ok, f"{steps} states checked, {len(inv)} violations")
    assert ok, inv[:5]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
