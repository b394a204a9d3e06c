"""Netlist IR for cascades of reversible gates on persistent lines.

Text format, one statement per line, ``#`` starts a comment::

    width 3
    line 0 input CLK
    line 1 input D
    line 2 wire
    line 3 const 0
    gate SAM 0 1 2
    output 2 Q
    feedback 2 -> 2

Every line is transformed in place by the cells that touch it, so there is no
fan-out: a value needed twice must be copied with FG or DFG.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import NetlistSyntaxError, OscillationError, UnassignedInputError, UnknownGateError
from .perm import apply_gate, builtin_gate
from .quantum import Metrics, depth_of, gate_blocks, quantum_cost, registered_decomposition

ROLES = ("input", "const", "wire")


@dataclass(frozen=True)
class Line:
    role: str
    label: Optional[str] = None  # input label
    value: int = 0  # constant value

    def __str__(self):
        if self.role == "input":
            return f"input {self.label}"
        if self.role == "const":
            return f"const {self.value}"
        return "wire"


@dataclass(frozen=True)
class Cell:
    gate: str
    lines: Tuple[int, ...]


@dataclass(frozen=True)
class Netlist:
    width: int
    lines: Tuple[Line, ...]
    cells: Tuple[Cell, ...] = ()
    outputs: Tuple[Tuple[int, str], ...] = ()
    feedbacks: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        if len(self.lines) != self.width:
            raise ValueError(f"{len(self.lines)} line roles for width {self.width}")
        for cell in self.cells:
            g = builtin_gate(cell.gate)
            if len(cell.lines) != g.width or len(set(cell.lines)) != len(cell.lines):
                raise ValueError(f"cell {cell.gate} needs {g.width} distinct lines, got {cell.lines}")
            if any(not 0 <= i < self.width for i in cell.lines):
                raise ValueError(f"cell {cell.gate} line out of range: {cell.lines}")
        for i, _ in self.outputs:
            if not 0 <= i < self.width:
                raise ValueError(f"output line {i} out of range")
        dsts = [d for _, d in self.feedbacks]
        if len(set(dsts)) != len(dsts):
            raise ValueError("feedback destinations must be distinct")
        for s, d in self.feedbacks:
            if not (0 <= s < self.width and 0 <= d < self.width):
                raise ValueError(f"feedback {s} -> {d} out of range")
            if self.lines[d].role == "const":
                raise ValueError(f"feedback destination {d} is a constant line")

    @property
    def input_labels(self) -> List[str]:
        fb = {d for _, d in self.feedbacks}
        return [ln.label for i, ln in enumerate(self.lines) if ln.role == "input" and i not in fb]

    def output_line(self, label: str) -> int:
        for i, lab in self.outputs:
            if lab == label:
                return i
        raise KeyError(f"no output labelled {label!r}")

    def append(self, gate: str, *lines: int) -> "Netlist":
        return Netlist(self.width, self.lines, self.cells + (Cell(gate.upper(), tuple(lines)),),
                       self.outputs, self.feedbacks)


# -- parsing -------------------------------------------------------------

_INT = re.compile(r"^\d+$")
_LABEL = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


def _tokens(text: str):
    """Yield (line number, [(column, token), ...]) with comments removed."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", body)]
        if toks:
            yield lineno, toks


def _int(tok, lineno, what):
    col, s = tok
    if not _INT.match(s):
        raise NetlistSyntaxError(f"expected {what}, got {s!r}", lineno, col)
    return int(s)


def parse_netlist(text: str) -> Netlist:
    width = None
    roles: Dict[int, Line] = {}
    cells: List[Cell] = []
    outputs: List[Tuple[int, str]] = []
    feedbacks: List[Tuple[int, int]] = []
    dsts = set()

    def index(tok, lineno, what="line index"):
        i = _int(tok, lineno, what)
        if width is None:
            raise NetlistSyntaxError("'width' must come first", lineno, tok[0])
        if i >= width:
            raise NetlistSyntaxError(f"{what} {i} out of range for width {width}", lineno, tok[0], "index-range")
        return i

    def arity(toks, n, lineno, usage):
        if len(toks) != n:
            col = toks[min(len(toks), n) - 1][0] if len(toks) > n else toks[-1][0]
            raise NetlistSyntaxError(f"expected '{usage}'", lineno, col)

    for lineno, toks in _tokens(text):
        col, kw = toks[0]
        if kw == "width":
            arity(toks, 2, lineno, "width N")
            if width is not None:
                raise NetlistSyntaxError("duplicate 'width'", lineno, col)
            width = _int(toks[1], lineno, "width")
            if width < 1:
                raise NetlistSyntaxError("width must be positive", lineno, toks[1][0], "index-range")
        elif kw == "line":
            if len(toks) < 3:
                raise NetlistSyntaxError("expected 'line IDX (input LABEL | const 0|1 | wire)'", lineno, col)
            i = index(toks[1], lineno)
            if i in roles:
                raise NetlistSyntaxError(f"line {i} declared twice", lineno, toks[1][0], "duplicate-line")
            rcol, role = toks[2]
            if role == "input":
                arity(toks, 4, lineno, "line IDX input LABEL")
                if not _LABEL.match(toks[3][1]):
                    raise NetlistSyntaxError(f"bad label {toks[3][1]!r}", lineno, toks[3][0])
                roles[i] = Line("input", toks[3][1])
            elif role == "const":
                arity(toks, 4, lineno, "line IDX const 0|1")
                if toks[3][1] not in ("0", "1"):
                    raise NetlistSyntaxError("constant must be 0 or 1", lineno, toks[3][0])
                roles[i] = Line("const", None, int(toks[3][1]))
            elif role == "wire":
                arity(toks, 3, lineno, "line IDX wire")
                roles[i] = Line("wire")
            else:
                raise NetlistSyntaxError(f"unknown line role {role!r}", lineno, rcol)
        elif kw == "gate":
            if len(toks) < 2:
                raise NetlistSyntaxError("expected 'gate NAME IDX...'", lineno, col)
            gcol, name = toks[1]
            try:
                g = builtin_gate(name)
            except UnknownGateError:
                raise NetlistSyntaxError(f"unknown gate {name!r}", lineno, gcol, "unknown-gate") from None
            idx = [index(t, lineno) for t in toks[2:]]
            if len(idx) != g.width:
                raise NetlistSyntaxError(f"{g.name} takes {g.width} lines, got {len(idx)}", lineno, gcol, "arity")
            if len(set(idx)) != len(idx):
                raise NetlistSyntaxError(f"{g.name} lines must be distinct, got {idx}", lineno, gcol, "arity")
            cells.append(Cell(g.name, tuple(idx)))
        elif kw == "output":
            arity(toks, 3, lineno, "output IDX LABEL")
            i = index(toks[1], lineno)
            if not _LABEL.match(toks[2][1]):
                raise NetlistSyntaxError(f"bad label {toks[2][1]!r}", lineno, toks[2][0])
            if any(lab == toks[2][1] for _, lab in outputs):
                raise NetlistSyntaxError(f"output label {toks[2][1]!r} used twice", lineno, toks[2][0], "duplicate-output")
            outputs.append((i, toks[2][1]))
        elif kw == "feedback":
            arity(toks, 4, lineno, "feedback SRC -> DST")
            if toks[2][1] != "->":
                raise NetlistSyntaxError("expected '->'", lineno, toks[2][0])
            s, d = index(toks[1], lineno), index(toks[3], lineno)
            if d in dsts:
                raise NetlistSyntaxError(f"line {d} is already a feedback destination", lineno, toks[3][0],
                                         "duplicate-feedback")
            dsts.add(d)
            feedbacks.append((s, d))
        else:
            raise NetlistSyntaxError(f"unknown statement {kw!r}", lineno, col)

    if width is None:
        raise NetlistSyntaxError("missing 'width' statement")
    missing = [i for i in range(width) if i not in roles]
    if missing:
        raise NetlistSyntaxError(f"lines without a role: {missing}", kind="undeclared-line")
    for s, d in feedbacks:
        if roles[d].role == "const":
            raise NetlistSyntaxError(f"feedback destination {d} is a constant line", kind="feedback-role")
    return Netlist(width, tuple(roles[i] for i in range(width)), tuple(cells), tuple(outputs), tuple(feedbacks))


def serialize(n: Netlist) -> str:
    out = [f"width {n.width}"]
    out += [f"line {i} {ln}" for i, ln in enumerate(n.lines)]
    out += [f"gate {c.gate} " + " ".join(map(str, c.lines)) for c in n.cells]
    out += [f"output {i} {lab}" for i, lab in n.outputs]
    out += [f"feedback {s} -> {d}" for s, d in n.feedbacks]
    return "\n".join(out) + "\n"


# -- evaluation ------------------------------------------------------------

def initial_values(n: Netlist, inputs: Mapping[str, int], feedback_state: Sequence[int] = ()) -> List[int]:
    if len(feedback_state) != len(n.feedbacks):
        raise ValueError(f"feedback_state has {len(feedback_state)} bits, netlist has {len(n.feedbacks)} feedbacks")
    fb = {d: int(v) for (_, d), v in zip(n.feedbacks, feedback_state)}
    vals = []
    for i, ln in enumerate(n.lines):
        if i in fb:
            vals.append(fb[i])
        elif ln.role == "input":
            if ln.label not in inputs:
                raise UnassignedInputError(f"input {ln.label!r} not assigned")
            vals.append(int(inputs[ln.label]) & 1)
        elif ln.role == "const":
            vals.append(ln.value)
        else:
            vals.append(0)
    return vals


def run_cells(n: Netlist, vals: List[int]) -> List[int]:
    vals = list(vals)
    for c in n.cells:
        out = apply_gate(builtin_gate(c.gate), [vals[i] for i in c.lines])
        for i, v in zip(c.lines, out):
            vals[i] = v
    return vals


def evaluate(n: Netlist, inputs: Mapping[str, int], feedback_state: Sequence[int] = ()) -> Tuple[int, ...]:
    """Final value of every line after one pass through the cells."""
    return tuple(run_cells(n, initial_values(n, inputs, feedback_state)))


def outputs_of(n: Netlist, values: Sequence[int]) -> Dict[str, int]:
    return {lab: values[i] for i, lab in n.outputs}


def next_feedback(n: Netlist, values: Sequence[int]) -> Tuple[int, ...]:
    return tuple(values[s] for s, _ in n.feedbacks)


def end_to_end_map(n: Netlist) -> Tuple[int, ...]:
    """Code map over all 2^width line values (roles ignored); MSB = line 0."""
    w = n.width
    out = []
    for code in range(1 << w):
        vals = [(code >> (w - 1 - i)) & 1 for i in range(w)]
        res = run_cells(n, vals)
        out.append(sum(b << (w - 1 - i) for i, b in enumerate(res)))
    return tuple(out)


# -- metrics ---------------------------------------------------------------

def cell_blocks(n: Netlist) -> List[Tuple[int, ...]]:
    """Merged 1x1/2x2 gate line sets of every cell, mapped onto netlist lines.

    Blocks are never merged across cell boundaries, so the block count equals
    the sum of the cells' registered costs.
    """
    blocks = []
    for c in n.cells:
        for b in gate_blocks(registered_decomposition(c.gate)):
            blocks.append(tuple(sorted(c.lines[i] for i in b)))
    return blocks


def garbage_lines(n: Netlist) -> List[int]:
    used = {i for i, _ in n.outputs} | {s for s, _ in n.feedbacks}
    return [i for i in range(n.width) if i not in used]


def metrics(n: Netlist) -> Metrics:
    """Cost = sum of registered costs; delay = dependency depth of the merged gates."""
    cost = sum(quantum_cost(registered_decomposition(c.gate)) for c in n.cells)
    ncv = sum(len(registered_decomposition(c.gate)) for c in n.cells)
    return Metrics(
        quantum_cost=cost,
        delay=depth_of(cell_blocks(n)),
        garbage=len(garbage_lines(n)),
        gate_count=len(n.cells),
        serial_delay=cost,
        ncv_count=ncv,
    )


# -- stimulus --------------------------------------------------------------

@dataclass(frozen=True)
class StimulusTrace:
    """Ordered input assignments; a step inherits unassigned labels from the previous one."""

    steps: Tuple[Dict[str, int], ...] = field(default_factory=tuple)

    def check(self, labels: Sequence[str]) -> None:
        known = set(labels)
        for k, step in enumerate(self.steps):
            bad = set(step) - known
            if bad:
                raise UnassignedInputError(f"stimulus step {k} names unknown inputs {sorted(bad)}")


def parse_stimulus(text: str) -> StimulusTrace:
    """One step per line: ``LABEL=BIT ...``; ``#`` comments; blank lines ignored."""
    steps = []
    for lineno, toks in _tokens(text):
        step = {}
        for col, tok in toks:
            m = re.match(r"^([A-Za-z_][A-Za-z0-9_']*)=([01])$", tok)
            if not m:
                raise NetlistSyntaxError(f"expected LABEL=0|1, got {tok!r}", lineno, col)
            step[m.group(1)] = int(m.group(2))
        steps.append(step)
    return StimulusTrace(tuple(steps))


@dataclass(frozen=True)
class TraceStep:
    inputs: Dict[str, int]
    outputs: Dict[str, int]
    feedback: Tuple[int, ...]
    passes: int


def run_trace(n: Netlist, trace: StimulusTrace, feedback_state: Sequence[int] = (), settle: bool = True,
              cap: int = 16) -> List[TraceStep]:
    """Drive a netlist through a stimulus trace, carrying feedback between steps.

    With ``settle`` each step repeats the pass until the feedback values stop
    changing (``OscillationError`` after ``cap`` passes or on a revisit);
    otherwise each step is a single pass.
    """
    trace.check(n.input_labels)
    fb = tuple(feedback_state) if feedback_state else (0,) * len(n.feedbacks)
    cur_in: Dict[str, int] = {}
    out = []
    for step in trace.steps:
        cur_in = {**cur_in, **step}
        seen = [fb]
        passes = 0
        while True:
            vals = evaluate(n, cur_in, fb)
            passes += 1
            nxt = next_feedback(n, vals)
            if not settle or nxt == fb:
                fb = nxt
                break
            if nxt in seen or passes >= cap:
                raise OscillationError(f"no fixed point for inputs {cur_in}: feedback cycles through {seen + [nxt]}")
            seen.append(nxt)
            fb = nxt
        out.append(TraceStep(dict(cur_in), outputs_of(n, vals), fb, passes))
    return out
