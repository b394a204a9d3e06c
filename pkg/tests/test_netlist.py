import random
from importlib import resources

import pytest

from revseq.errors import NetlistSyntaxError, UnassignedInputError
from revseq.netlist import (
    end_to_end_map, evaluate, garbage_lines, metrics, parse_netlist, parse_stimulus, run_trace, serialize,
)
from revseq.perm import is_bijective
from revseq.sequential import DESIGN_IDS, design_text

FG_TEXT = """width 2
line 0 input A
line 1 input B
gate FG 0 1
output 1 S
"""


def test_minimal_file():
    n = parse_netlist(FG_TEXT)
    assert len(n.cells) == 1 and n.width == 2
    assert evaluate(n, {"A": 1, "B": 0})[1] == 1


@pytest.mark.parametrize("text,kind", [
    (FG_TEXT.replace("gate FG 0 1", "gate FG 0 0"), "arity"),
    (FG_TEXT.replace("gate FG 0 1", "gate FG 0"), "arity"),
    (FG_TEXT.replace("gate FG 0 1", "gate XOR 0 1"), "unknown-gate"),
    (FG_TEXT.replace("line 1 input B", "line 0 input B"), "duplicate-line"),
    (FG_TEXT.replace("output 1 S", "output 2 S"), "index-range"),
    (FG_TEXT.replace("gate FG 0 1", "gate FG 0 one"), "syntax"),
    (FG_TEXT.replace("output 1 S", "feedback 1 0"), "syntax"),
    (FG_TEXT.replace("width 2", "wide 2"), "syntax"),
])
def test_diagnostics(text, kind):
    with pytest.raises(NetlistSyntaxError) as exc:
        parse_netlist(text)
    assert exc.value.kind == kind
    assert exc.value.line is not None


def test_diagnostic_position():
    with pytest.raises(NetlistSyntaxError) as exc:
        parse_netlist(FG_TEXT.replace("gate FG 0 1", "gate FG 0 7"))
    assert (exc.value.line, exc.value.column) == (4, 11)


def test_empty_netlist_is_identity():
    n = parse_netlist("width 2\nline 0 input A\nline 1 input B\noutput 0 A\noutput 1 B\n")
    assert evaluate(n, {"A": 1, "B": 0}) == (1, 0)
    m = metrics(n)
    assert (m.quantum_cost, m.delay, m.gate_count, m.garbage) == (0, 0, 0, 0)
    n2 = parse_netlist("width 3\nline 0 input A\nline 1 wire\nline 2 const 1\noutput 0 A\n")
    assert metrics(n2).garbage == 2


def test_unassigned_input():
    with pytest.raises(UnassignedInputError):
        evaluate(parse_netlist(FG_TEXT), {"A": 1})


def test_gated_d_design():
    n = parse_netlist(design_text("gated_d"))
    assert [c.gate for c in n.cells] == ["SAM", "DFG"]
    assert len(n.feedbacks) == 1
    vals = evaluate(n, {"CLK": 1, "D": 1}, (0,))
    assert vals[n.feedbacks[0][0]] == 1
    assert metrics(n).quantum_cost == 6


def test_gated_jk_metrics():
    m = metrics(parse_netlist(design_text("gated_jk")))
    assert (m.quantum_cost, m.serial_delay) == (10, 10)


@pytest.mark.parametrize("design", DESIGN_IDS)
def test_round_trip_shipped(design):
    n = parse_netlist(design_text(design))
    text = serialize(n)
    assert parse_netlist(text) == n
    assert serialize(parse_netlist(text)) == text


def test_shipped_files_present():
    names = sorted(p.name for p in resources.files("revseq").joinpath("designs").iterdir() if p.name.endswith(".rnl"))
    assert names == sorted(f"{d}.rnl" for d in DESIGN_IDS)


@pytest.mark.parametrize("design", DESIGN_IDS)
def test_garbage_partition(design):
    n = parse_netlist(design_text(design))
    used = {i for i, _ in n.outputs} | {s for s, _ in n.feedbacks}
    assert len(garbage_lines(n)) + len(used) == n.width


def _random_netlist(rng, width, n_cells):
    from revseq.perm import builtin_gate
    gates = [g for g in ("NOT", "FG", "DFG", "TG", "FRG", "PG", "SAM", "MPG") if builtin_gate(g).width <= width]
    lines = [f"width {width}"] + [f"line {i} input I{i}" for i in range(width)]
    for _ in range(n_cells):
        g = rng.choice(gates)
        idx = rng.sample(range(width), builtin_gate(g).width)
        lines.append(f"gate {g} " + " ".join(map(str, idx)))
    lines += [f"output {i} O{i}" for i in range(width)]
    return parse_netlist("\n".join(lines) + "\n")


def test_bijectivity_lifting_random():
    rng = random.Random(2024)
    for _ in range(50):
        n = _random_netlist(rng, rng.randint(1, 4), rng.randint(0, 8))
        assert is_bijective(end_to_end_map(n))


def test_metric_monotonicity():
    rng = random.Random(5)
    n = _random_netlist(rng, 4, 0)
    prev = metrics(n)
    for g in ("FG", "SAM", "DFG", "NOT", "MPG"):
        from revseq.perm import builtin_gate
        n = n.append(g, *rng.sample(range(4), builtin_gate(g).width))
        m = metrics(n)
        assert m.quantum_cost >= prev.quantum_cost and m.gate_count == prev.gate_count + 1
        assert m.delay <= m.quantum_cost
        prev = m


def test_stimulus_trace():
    n = parse_netlist(design_text("gated_d"))
    trace = parse_stimulus("CLK=1 D=1\nCLK=0\n# comment\nCLK=0 D=0\n")
    steps = run_trace(n, trace)
    assert [s.outputs["Q"] for s in steps] == [1, 1, 1]
    with pytest.raises(NetlistSyntaxError):
        parse_stimulus("CLK=2")
    with pytest.raises(UnassignedInputError):
        run_trace(n, parse_stimulus("X=1"))
