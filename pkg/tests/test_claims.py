import json

import pytest

from revseq.claims import (
    PROPOSED, claims_ledger, design_records, improvement_percent, improvement_records, render_report, verdict,
)


@pytest.mark.parametrize("old,new,want", [(10, 5, 50), (13, 5, 62), (16, 10, 37), (8, 5, 37), (7, 7, 0),
                                          (3, 2, 33), (3, 1, 67)])
def test_improvement_examples(old, new, want):
    assert improvement_percent(old, new) == want


def test_improvement_needs_baseline():
    with pytest.raises(ValueError):
        improvement_percent(0, 1)
    assert improvement_percent(8, 11) == -37


def test_verdicts():
    assert verdict(5, 5, 5) == "match"
    assert verdict(10, 11, 11) == "table-matches"
    assert verdict(10, 11, 10) == "text-matches"
    assert verdict(10, 11, 12) == "mismatch"
    assert verdict(None, 4, 4) == "match"


def test_design_records_total():
    recs = design_records()
    assert len(recs) == 3 * len(PROPOSED)
    assert len({(r.design, r.metric) for r in recs}) == len(recs)


def test_dual_claims():
    recs = {(r.design, r.metric): r for r in design_records()}
    g = recs[("gated_sr", "quantum_cost")]
    assert (g.text_claim, g.table_claim, g.achieved, g.verdict) == (10, 11, 11, "table-matches")
    m = recs[("ms_sr", "quantum_cost")]
    assert (m.text_claim, m.table_claim, m.verdict) == (14, 15, "table-matches")
    assert recs[("sr", "quantum_cost")].verdict == "match"


def test_gated_garbage_flagged():
    recs = {(r.design, r.metric): r for r in design_records()}
    for d in ("gated_sr", "gated_jk", "gated_d"):
        assert recs[(d, "garbage")].flagged


def test_json_schema_and_determinism():
    recs = claims_ledger()
    a = render_report(recs, "json")
    assert a == render_report(claims_ledger(), "json")
    rows = json.loads(a)
    assert set(rows[0]) == {"design", "metric", "text_claim", "table_claim", "achieved", "verdict"}
    assert render_report([], "text") == "(no records)\n"


def test_sam_formula_conflict_recorded():
    recs = {(r.design, r.metric): r for r in claims_ledger()}
    assert recs[("SAM", "printed_formula_distinct_outputs")].verdict == "mismatch"
    assert recs[("SAM", "truth_table_bijective")].verdict == "match"


def test_improvement_rows_cover_tables():
    recs = improvement_records()
    assert len(recs) == 14 * 3
