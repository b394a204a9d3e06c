import itertools

import pytest

from revseq.errors import IllegalInputError, OscillationError
from revseq.sequential import (
    DESIGN_IDS, builtin_design, clock_step, clock_trace, settle, settle_count, step, verify_characteristic,
)


def test_sr_examples():
    sr = builtin_design("sr")
    assert settle(sr, {"S": 1, "R": 0}, {"Q": 0}) == {"Q": 1}
    for q in (0, 1):
        assert settle(sr, {"S": 0, "R": 0}, {"Q": q}) == {"Q": q}
    with pytest.raises(IllegalInputError):
        settle(sr, {"S": 1, "R": 1}, {"Q": 0})


def test_jk_race_around_detected():
    jk = builtin_design("jk")
    assert step(jk, {"J": 1, "K": 1}, {"Q": 0}) == {"Q": 1}
    with pytest.raises(OscillationError):
        settle(jk, {"J": 1, "K": 1}, {"Q": 0})


def test_ms_jk_toggles_each_clock():
    ff = builtin_design("ms_jk")
    s = {"Qm": 0, "Q": 0}
    seen = []
    for _ in range(6):
        s = clock_step(ff, {"J": 1, "K": 1}, s)
        seen.append(s["Q"])
    assert seen == [1, 0, 1, 0, 1, 0]


def test_ms_d_captures_then_exposes():
    ff = builtin_design("ms_d")
    tr = clock_trace(ff, {"D": 1}, {"Qm": 0, "Q": 0})
    assert tr.after_phase1 == {"Qm": 1, "Q": 0}
    assert tr.after_phase2 == {"Qm": 1, "Q": 1}


def test_ms_sr_hold():
    ff = builtin_design("ms_sr")
    for q in (0, 1):
        s = {"Qm": q, "Q": q}
        for _ in range(10):
            s = clock_step(ff, {"S": 0, "R": 0}, s)
            assert s["Q"] == q


@pytest.mark.parametrize("design", DESIGN_IDS)
def test_characteristic_complete(design):
    rep = verify_characteristic(design)
    assert rep.passed, [r for r in rep.rows if not r.passed]


def test_enumeration_sizes():
    sizes = {d: len(verify_characteristic(d).rows) for d in DESIGN_IDS}
    assert sizes["sr"] == 6 and sizes["jk"] == 8 and sizes["gated_d"] == 8 and sizes["gated_jk"] == 16


@pytest.mark.parametrize("design", ["sr", "gated_sr", "gated_d", "ms_sr", "ms_jk", "ms_d"])
def test_settling_bound(design):
    spec = builtin_design(design)
    names = [ln.label for ln in spec.netlist.lines if ln.role == "input"]
    for bits in itertools.product((0, 1), repeat=len(names)):
        inputs = dict(zip(names, bits))
        if not spec.legal(inputs):
            continue
        for sbits in itertools.product((0, 1), repeat=len(spec.state)):
            state = dict(zip(spec.state_names, sbits))
            assert settle_count(spec, inputs, state) <= 2


def test_jk_settles_except_toggle():
    """Race-around is the only non-settling case of the JK latches."""
    for design in ("jk", "gated_jk"):
        spec = builtin_design(design)
        names = [ln.label for ln in spec.netlist.lines if ln.role == "input"]
        for bits in itertools.product((0, 1), repeat=len(names)):
            inputs = dict(zip(names, bits))
            toggling = inputs["J"] and inputs["K"] and inputs.get("CLK", 1)
            for q in (0, 1):
                if toggling:
                    with pytest.raises(OscillationError):
                        settle(spec, inputs, {"Q": q})
                else:
                    assert settle_count(spec, inputs, {"Q": q}) <= 2


@pytest.mark.parametrize("design", ["ms_sr", "ms_jk", "ms_d"])
def test_master_slave_single_change(design):
    spec = builtin_design(design)
    for row in verify_characteristic(design).rows:
        assert row.single_change
