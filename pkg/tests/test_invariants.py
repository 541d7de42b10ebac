import dataclasses

import pytest

from mfotl_monitor.invariants import check_state
from mfotl_monitor.monitor import minit, mstep_tables

from cases import BEST, PIRACY_TRACE, PIRATED, QUALITY_TRACE, prefix
from suites import differential


def _states(f, trace):
    st = minit(f)
    for k, (db, ts) in enumerate(trace):
        _, st = mstep_tables(db, ts, st)
        yield prefix(trace[: k + 1]), st


@pytest.mark.parametrize("f,trace", [(BEST, QUALITY_TRACE), (PIRATED, PIRACY_TRACE)])
def test_worked_examples_well_formed(f, trace):
    for p, st in _states(f, trace):
        assert check_state(p, f, st) == []


def test_detects_corrupted_release_aux():
    *_, (p, st) = _states(PIRATED, PIRACY_TRACE[:4])
    t, L, R = st.mf.aux[0]
    bad_aux = ((t, L, R | {(1,)}),) + st.mf.aux[1:]
    bad = dataclasses.replace(st, mf=dataclasses.replace(st.mf, aux=bad_aux))
    assert check_state(p, PIRATED, bad) != []


def test_detects_dropped_entry():
    *_, (p, st) = _states(PIRATED, PIRACY_TRACE[:4])
    bad = dataclasses.replace(st, mf=dataclasses.replace(st.mf, aux=st.mf.aux[1:]))
    assert check_state(p, PIRATED, bad) != []


@pytest.mark.parametrize("chunk", range(4))
def test_random_runs(chunk):
    errs = [e for s in range(chunk * 50, (chunk + 1) * 50) for e in differential(s, invariants=True)]
    assert errs == []
