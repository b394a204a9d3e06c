import json

import pytest

from revseq.claims import claims_ledger, render_report
from revseq.cli import run
from revseq.netlist import metrics, parse_netlist
from revseq.perm import SAM_TABLE
from revseq.sequential import design_text


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gates_table_sam(capsys):
    code, out, _ = _run(capsys, "gates", "table", "SAM")
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 8
    for line, want in zip(rows, SAM_TABLE):
        assert tuple(int(b) for b in line.split("|")[1].split()) == want


def test_gates_check_and_list(capsys):
    assert _run(capsys, "gates", "check", "MPG")[0] == 0
    code, out, _ = _run(capsys, "gates", "list")
    assert code == 0 and "SAM" in out
    assert _run(capsys, "gates", "check", "NOPE")[0] == 2
    assert _run(capsys, "gates", "table")[0] == 2


def test_ff_verify_all(capsys):
    code, out, _ = _run(capsys, "ff", "verify", "all")
    assert code == 0 and out.count("pass") == 8
    assert _run(capsys, "ff", "verify", "t_flop")[0] == 2


def test_report_claims_matches_library(capsys):
    code, out, _ = _run(capsys, "report", "claims")
    assert code == 0
    assert out == render_report(claims_ledger(), "text")
    assert "table-matches" in out
    code, out, _ = _run(capsys, "report", "claims", "--json")
    assert json.loads(out) == json.loads(render_report(claims_ledger(), "json"))
    code, out, _ = _run(capsys, "report", "claims", "--design", "nothing")
    assert code == 0 and out == "(no records)\n"


def test_report_deterministic(capsys):
    a = _run(capsys, "report", "improvements")[1]
    b = _run(capsys, "report", "improvements")[1]
    assert a == b


def test_qc_verify(capsys):
    code, out, _ = _run(capsys, "qc", "verify")
    assert code == 0 and "FAIL" not in out
    code, out, _ = _run(capsys, "qc", "verify", "SAM")
    assert code == 0 and out.count("\n") == 2


def test_analyze_matches_library(tmp_path, capsys):
    f = tmp_path / "gjk.rnl"
    f.write_text(design_text("gated_jk"))
    code, out, _ = _run(capsys, "analyze", str(f), "--json")
    m = metrics(parse_netlist(f.read_text()))
    data = json.loads(out)
    assert code == 0 and data["quantum_cost"] == m.quantum_cost == 10 and data["garbage"] == m.garbage


def test_parse_error_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.rnl"
    f.write_text("width 2\nline 0 input A\nline 1 wire\ngate FG 0 0\n")
    code, _, err = _run(capsys, "analyze", str(f))
    assert code == 2 and "arity" in err


def test_sim(tmp_path, capsys):
    f = tmp_path / "d.rnl"
    f.write_text(design_text("ms_d"))
    s = tmp_path / "stim.txt"
    s.write_text("CLK=1 D=1\nCLK=0\n")
    code, out, _ = _run(capsys, "sim", str(f), "--stimulus", str(s))
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    assert lines[2].split("|")[1].split() == ["1", "0"]


def test_usage_errors(capsys):
    assert _run(capsys, "frobnicate")[0] == 2
    assert _run(capsys, "qc", "synth")[0] == 2


def test_qc_synth_with_snapshot(tmp_path, capsys, atlas, monkeypatch):
    snap = tmp_path / "atlas.txt"
    atlas.save(snap)
    monkeypatch.setenv("REVSEQ_ATLAS", str(snap))
    code, out, _ = _run(capsys, "qc", "synth", "PG")
    assert code == 0 and "minimum NCV count   4" in out
    perm = tmp_path / "p.txt"
    perm.write_text("0 1 2 3 5 4 7 6\n")
    code, out, _ = _run(capsys, "--atlas", str(snap), "qc", "synth", "--perm", str(perm))
    assert code == 0 and "minimum NCV count   1" in out
    code, _, _ = _run(capsys, "qc", "synth", "TG", "--max-cost", "4")
    assert code == 1
