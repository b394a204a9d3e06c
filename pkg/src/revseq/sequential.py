"""Sequential semantics for reversible latches and flip-flops.

A design is a netlist whose feedback arcs carry state.  Several feedback arcs
may carry copies of the same state bit (a value needed at two gate inputs
must be copied), so ``LatchSpec.state`` groups feedback indices under one
state name.

Three evaluation modes:

``step``
    one pass through the cells; feedback sources become the next state.
``settle``
    repeat ``step`` with the inputs held until nothing changes.
``clock_step``
    master-slave: settle with CLK = 1, then settle with CLK = 0.

JK designs with J = K = 1 and the clock high toggle on every pass (the
classic race-around), so they are verified with ``step``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from .errors import IllegalInputError, OscillationError, UnknownGateError
from .netlist import Netlist, evaluate, next_feedback, outputs_of, parse_netlist

SETTLE_CAP = 16

State = Dict[str, int]


def _sr(q, i):
    return i["S"] | ((1 - i["R"]) & q)


def _jk(q, i):
    return (i["J"] & (1 - q)) | ((1 - i["K"]) & q)


def _gated(core):
    return lambda q, i: ((1 - i["CLK"]) & q) | (i["CLK"] & core(q, i))


# characteristic id -> (data inputs, next-state function)
CHARACTERISTICS: Dict[str, Tuple[Tuple[str, ...], Callable[[int, Mapping[str, int]], int]]] = {
    "SR": (("S", "R"), _sr),
    "JK": (("J", "K"), _jk),
    "D": (("D",), lambda q, i: i["D"]),
    "gated-SR": (("CLK", "S", "R"), _gated(_sr)),
    "gated-JK": (("CLK", "J", "K"), _gated(_jk)),
    "gated-D": (("CLK", "D"), _gated(lambda q, i: i["D"])),
}

# the same equations as printed, kept for the claims ledger
PRINTED_EQUATIONS = {
    "SR": "Q = S + R'Q",
    "JK": "Q = JQ' + Q'K",
    "gated-JK": "Q = CLK'Q + CLK(JQ' + QK')",
    "gated-D": "Q = CLK.Q + CLK.D",
}


def _no_sr_conflict(i: Mapping[str, int]) -> bool:
    return not (i.get("S", 0) and i.get("R", 0))


def _always(i: Mapping[str, int]) -> bool:
    return True


@dataclass(frozen=True)
class LatchSpec:
    name: str
    netlist: Netlist
    state: Tuple[Tuple[str, Tuple[int, ...]], ...]  # state name -> feedback indices
    characteristic: str
    clock: Optional[str] = None
    master_slave: bool = False
    mode: str = "settle"  # how verify_characteristic computes Q+
    legal: Callable[[Mapping[str, int]], bool] = field(default=_always, compare=False)
    legal_text: str = "any"

    def __post_init__(self):
        covered = sorted(k for _, idx in self.state for k in idx)
        if covered != list(range(len(self.netlist.feedbacks))):
            raise ValueError(f"{self.name}: state groups must cover every feedback exactly once")
        names, _ = CHARACTERISTICS[self.characteristic]
        labels = set(self.netlist.input_labels)
        want = set(names) | ({self.clock} if self.clock else set())
        if want != labels:
            raise ValueError(f"{self.name}: inputs {sorted(labels)} do not match characteristic {sorted(want)}")
        if self.mode not in ("step", "settle", "clock"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def state_names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.state)

    def feedback_state(self, state: Mapping[str, int]) -> Tuple[int, ...]:
        fb = [0] * len(self.netlist.feedbacks)
        for name, idx in self.state:
            for k in idx:
                fb[k] = int(state[name]) & 1
        return tuple(fb)

    def read_state(self, fb: Tuple[int, ...]) -> State:
        out = {}
        for name, idx in self.state:
            vals = {fb[k] for k in idx}
            if len(vals) != 1:
                raise OscillationError(f"{self.name}: copies of state {name} disagree: {[fb[k] for k in idx]}")
            out[name] = vals.pop()
        return out


def _check_legal(spec: LatchSpec, inputs: Mapping[str, int]):
    if not spec.legal(inputs):
        raise IllegalInputError(f"{spec.name}: inputs {dict(inputs)} violate the legal-input predicate {spec.legal_text}")


def step(spec: LatchSpec, inputs: Mapping[str, int], state: Mapping[str, int]) -> State:
    """One pass through the cells."""
    vals = evaluate(spec.netlist, inputs, spec.feedback_state(state))
    return spec.read_state(next_feedback(spec.netlist, vals))


def settle(spec: LatchSpec, inputs: Mapping[str, int], state: Mapping[str, int], cap: int = SETTLE_CAP) -> State:
    """Iterate ``step`` with inputs held until a fixed point."""
    _check_legal(spec, inputs)
    cur = dict(state)
    seen = [cur]
    for _ in range(cap):
        nxt = step(spec, inputs, cur)
        if nxt == cur:
            return cur
        if nxt in seen:
            raise OscillationError(f"{spec.name}: inputs {dict(inputs)} cycle through states {seen + [nxt]}")
        seen.append(nxt)
        cur = nxt
    raise OscillationError(f"{spec.name}: no fixed point within {cap} iterations")


def settle_count(spec: LatchSpec, inputs: Mapping[str, int], state: Mapping[str, int]) -> int:
    """Number of state-changing passes before the fixed point."""
    _check_legal(spec, inputs)
    cur, n = dict(state), 0
    while True:
        nxt = step(spec, inputs, cur)
        if nxt == cur:
            return n
        n += 1
        if n > SETTLE_CAP:
            raise OscillationError(f"{spec.name}: no fixed point within {SETTLE_CAP} iterations")
        cur = nxt


@dataclass(frozen=True)
class ClockTrace:
    after_phase1: State
    after_phase2: State


def clock_trace(spec: LatchSpec, inputs: Mapping[str, int], state: Mapping[str, int]) -> ClockTrace:
    if not spec.master_slave or spec.clock is None:
        raise ValueError(f"{spec.name} is not a master-slave design")
    hi = dict(inputs, **{spec.clock: 1})
    lo = dict(inputs, **{spec.clock: 0})
    s1 = settle(spec, hi, state)
    s2 = settle(spec, lo, s1)
    return ClockTrace(s1, s2)


def clock_step(spec: LatchSpec, inputs: Mapping[str, int], state: Mapping[str, int]) -> State:
    """Full clock: phase 1 with CLK = 1 (master loads), phase 2 with CLK = 0 (slave loads)."""
    return clock_trace(spec, inputs, state).after_phase2


# -- built-in designs ------------------------------------------------------

DESIGN_IDS = ("sr", "gated_sr", "ms_sr", "jk", "gated_jk", "ms_jk", "gated_d", "ms_d")

_DESIGNS = {
    # id: (characteristic, clock, master_slave, mode, state groups)
    "sr": ("SR", None, False, "settle", (("Q", (0,)),)),
    "jk": ("JK", None, False, "step", (("Q", (0,)),)),
    "gated_sr": ("gated-SR", "CLK", False, "settle", (("Q", (0, 1)),)),
    "gated_jk": ("gated-JK", "CLK", False, "step", (("Q", (0, 1)),)),
    "gated_d": ("gated-D", "CLK", False, "settle", (("Q", (0,)),)),
    "ms_sr": ("SR", "CLK", True, "clock", (("Qm", (0,)), ("Q", (1, 2)))),
    "ms_jk": ("JK", "CLK", True, "clock", (("Qm", (0,)), ("Q", (1, 2)))),
    "ms_d": ("D", "CLK", True, "clock", (("Qm", (0,)), ("Q", (1,)))),
}


def design_text(design_id: str) -> str:
    if design_id not in _DESIGNS:
        raise UnknownGateError(f"unknown design {design_id!r}; known: {', '.join(DESIGN_IDS)}")
    return resources.files("revseq").joinpath("designs", f"{design_id}.rnl").read_text()


def builtin_design(design_id: str) -> LatchSpec:
    text = design_text(design_id)
    char, clock, ms, mode, groups = _DESIGNS[design_id]
    sr_family = char in ("SR", "gated-SR")
    return LatchSpec(
        name=design_id,
        netlist=parse_netlist(text),
        state=groups,
        characteristic=char,
        clock=clock,
        master_slave=ms,
        mode=mode,
        legal=_no_sr_conflict if sr_family else _always,
        legal_text="not (S and R)" if sr_family else "any",
    )


# -- characteristic verification ---------------------------------------------

@dataclass(frozen=True)
class CheckRow:
    inputs: Tuple[Tuple[str, int], ...]
    state: Tuple[Tuple[str, int], ...]
    expected: int
    got: Optional[int]
    q_output_ok: bool
    qn_output_ok: Optional[bool]
    single_change: bool
    error: str = ""

    @property
    def passed(self) -> bool:
        return (not self.error and self.got == self.expected and self.q_output_ok
                and self.qn_output_ok is not False and self.single_change)


@dataclass(frozen=True)
class CharacteristicReport:
    design: str
    characteristic: str
    mode: str
    rows: Tuple[CheckRow, ...]

    @property
    def passed(self) -> bool:
        return bool(self.rows) and all(r.passed for r in self.rows)

    @property
    def n_passed(self) -> int:
        return sum(r.passed for r in self.rows)


def _configurations(spec: LatchSpec):
    names, _ = CHARACTERISTICS[spec.characteristic]
    free = list(names)
    for bits in itertools.product((0, 1), repeat=len(free)):
        inputs = dict(zip(free, bits))
        if not spec.legal(inputs):
            continue
        for sbits in itertools.product((0, 1), repeat=len(spec.state)):
            yield inputs, dict(zip(spec.state_names, sbits))


def verify_characteristic(design) -> CharacteristicReport:
    """Check every (state, legal input) pair against the characteristic equation.

    Also checks that the Q output shows the computed next state and that Qn,
    where exposed, is the complement of the state fed into the evaluation.
    """
    spec = design if isinstance(design, LatchSpec) else builtin_design(design)
    _, fn = CHARACTERISTICS[spec.characteristic]
    labels = {lab for _, lab in spec.netlist.outputs}
    rows = []
    for inputs, state in _configurations(spec):
        expected = fn(state["Q"], inputs)
        err, got, q_ok, qn_ok, single = "", None, False, None, True
        try:
            if spec.mode == "clock":
                tr = clock_trace(spec, inputs, state)
                nxt = tr.after_phase2
                single = tr.after_phase1["Q"] == state["Q"]  # Q only moves in phase 2
                probe_in, probe_state = dict(inputs, **{spec.clock: 0}), nxt
            elif spec.mode == "settle":
                nxt = settle(spec, inputs, state)
                probe_in, probe_state = inputs, nxt
            else:
                nxt = step(spec, inputs, state)
                probe_in, probe_state = inputs, state
            got = nxt["Q"]
            vals = evaluate(spec.netlist, probe_in, spec.feedback_state(probe_state))
            outs = outputs_of(spec.netlist, vals)
            shown = step(spec, probe_in, probe_state)["Q"]
            q_ok = outs.get("Q") == shown
            if "Qn" in labels:
                qn_ok = outs["Qn"] == 1 - probe_state["Q"]
        except (OscillationError, IllegalInputError) as exc:
            err = str(exc)
        rows.append(CheckRow(tuple(sorted(inputs.items())), tuple(sorted(state.items())),
                             expected, got, q_ok, qn_ok, single, err))
    return CharacteristicReport(spec.name, spec.characteristic, spec.mode, tuple(rows))


def verify_all() -> List[CharacteristicReport]:
    return [verify_characteristic(d) for d in DESIGN_IDS]
