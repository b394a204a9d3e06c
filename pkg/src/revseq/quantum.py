"""Exact simulation of NOT / CNOT / controlled-V / controlled-V-dagger circuits.

Cost conventions
----------------
``primitive_count``
    Number of NCV primitives in the listing.
``quantum_cost``
    Number of 1x1 and 2x2 gates: maximal runs of consecutive primitives that
    together touch at most two lines are one 2x2 gate of unit cost.  A run
    such as ``CX(1,2) CV(2,1)`` costs 1.  Merging is greedy left to right,
    which is optimal for a fixed listing.
``logical_depth``
    Longest chain of unit-delay gates where two gates conflict iff their line
    sets intersect.  By default the gates are the merged 2x2 gates; pass
    ``merge=False`` to measure over raw primitives.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import UnknownGateError
from .perm import Permutation, builtin_gate

KINDS = ("X", "CX", "CV", "CVDG")

_A = (1 + 1j) / 2
_B = (1 - 1j) / 2

X_MATRIX = np.array([[0, 1], [1, 0]], dtype=complex)
# One of the two square roots of X; V @ V == X.
V_MATRIX = np.array([[_A, _B], [_B, _A]], dtype=complex)
VDG_MATRIX = V_MATRIX.conj().T


@dataclass(frozen=True)
class Primitive:
    kind: str
    target: int
    control: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown primitive kind {self.kind!r}")
        if self.kind == "X":
            if self.control is not None:
                raise ValueError("X takes no control")
        else:
            if self.control is None:
                raise ValueError(f"{self.kind} needs a control line")
            if self.control == self.target:
                raise ValueError("control and target must differ")
        if self.target < 0 or (self.control is not None and self.control < 0):
            raise ValueError("line indices must be non-negative")

    @property
    def lines(self) -> Tuple[int, ...]:
        return (self.target,) if self.control is None else (self.control, self.target)

    def remap(self, mapping: Sequence[int]) -> "Primitive":
        c = None if self.control is None else mapping[self.control]
        return Primitive(self.kind, mapping[self.target], c)

    def __str__(self):
        if self.control is None:
            return f"{self.kind}({self.target})"
        return f"{self.kind}({self.control},{self.target})"


_PRIM_RE = re.compile(r"^\s*(X|CX|CV|CVDG)\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$")


def parse_primitive(text: str) -> Primitive:
    """Inverse of ``str(Primitive)``: ``X(2)``, ``CV(0,1)`` ..."""
    m = _PRIM_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse primitive {text!r}")
    kind, a, b = m.groups()
    if b is None:
        return Primitive(kind, int(a))
    return Primitive(kind, int(b), int(a))


@dataclass(frozen=True)
class QuantumCircuit:
    width: int
    prims: Tuple[Primitive, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prims", tuple(self.prims))
        for p in self.prims:
            if max(p.lines) >= self.width:
                raise ValueError(f"{p} touches a line outside width {self.width}")

    def __add__(self, other: "QuantumCircuit") -> "QuantumCircuit":
        if other.width != self.width:
            raise ValueError("cannot concatenate circuits of different width")
        return QuantumCircuit(self.width, self.prims + other.prims)

    def __len__(self):
        return len(self.prims)

    def embed(self, lines: Sequence[int], width: int) -> "QuantumCircuit":
        """Place this circuit on ``lines`` of a wider circuit."""
        if len(lines) != self.width:
            raise ValueError("line assignment arity mismatch")
        return QuantumCircuit(width, tuple(p.remap(lines) for p in self.prims))

    def inverse(self) -> "QuantumCircuit":
        swap = {"CV": "CVDG", "CVDG": "CV"}
        return QuantumCircuit(
            self.width,
            tuple(Primitive(swap.get(p.kind, p.kind), p.target, p.control) for p in reversed(self.prims)),
        )

    def __str__(self):
        return " ".join(str(p) for p in self.prims) or "(empty)"

    @classmethod
    def parse(cls, width: int, text: str) -> "QuantumCircuit":
        items = re.findall(r"[A-Z]+\([^)]*\)", text)
        return cls(width, tuple(parse_primitive(t) for t in items))


def _check_lines(p: Primitive, width: int):
    if max(p.lines) >= width:
        raise IndexError(f"{p} out of range for width {width}")


def primitive_unitary(p: Primitive, width: int) -> np.ndarray:
    _check_lines(p, width)
    u = np.eye(1 << width, dtype=complex)
    return apply_primitive(u, p, width)


def apply_primitive(u: np.ndarray, p: Primitive, width: int) -> np.ndarray:
    """Return ``M_p @ u`` computed with row operations (exact for dyadic entries)."""
    dim = 1 << width
    out = u.copy()
    tmask = 1 << (width - 1 - p.target)
    cmask = 0 if p.control is None else 1 << (width - 1 - p.control)
    rows = np.arange(dim)
    r0 = rows[((rows & cmask) == cmask) & ((rows & tmask) == 0)]
    r1 = r0 | tmask
    if p.kind in ("X", "CX"):
        out[r0], out[r1] = u[r1], u[r0]
    else:
        a, b = (_A, _B) if p.kind == "CV" else (_B, _A)
        out[r0] = a * u[r0] + b * u[r1]
        out[r1] = b * u[r0] + a * u[r1]
    return out


def circuit_unitary(c: QuantumCircuit) -> np.ndarray:
    """Product of primitive unitaries; the first listed primitive acts first."""
    u = np.eye(1 << c.width, dtype=complex)
    for p in c.prims:
        u = apply_primitive(u, p, c.width)
    return u


def permutation_matrix(perm: Permutation) -> np.ndarray:
    n = len(perm.map)
    m = np.zeros((n, n), dtype=complex)
    m[list(perm.map), np.arange(n)] = 1
    return m


def is_unitary(u: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.allclose(u @ u.conj().T, np.eye(len(u)), rtol=0, atol=tol))


def equals_permutation(u: np.ndarray, perm: Permutation, tol: float = 1e-9) -> bool:
    """True iff ``u`` is ``perm``'s matrix times a single global phase."""
    u = np.asarray(u)
    if u.shape != (len(perm.map), len(perm.map)):
        raise ValueError(f"dimension mismatch: unitary {u.shape} vs permutation of {len(perm.map)}")
    phase = u[perm.map[0], 0]
    if abs(abs(phase) - 1) > tol:
        return False
    return bool(np.allclose(u, phase * permutation_matrix(perm), rtol=0, atol=tol))


def as_permutation(u: np.ndarray, tol: float = 1e-9) -> Optional[Permutation]:
    """Recover the permutation ``u`` realizes up to global phase, or None."""
    dim = u.shape[0]
    rows = np.argmax(np.abs(u), axis=0)
    try:
        perm = Permutation(dim.bit_length() - 1, tuple(int(r) for r in rows))
    except ValueError:
        return None
    return perm if equals_permutation(u, perm, tol) else None


def primitive_count(c: QuantumCircuit) -> int:
    return len(c.prims)


def gate_blocks(c: QuantumCircuit) -> List[Tuple[int, ...]]:
    """Line sets of the merged 1x1/2x2 gates, in order."""
    blocks: List[set] = []
    for p in c.prims:
        lines = set(p.lines)
        if blocks and len(blocks[-1] | lines) <= 2:
            blocks[-1] |= lines
        else:
            blocks.append(lines)
    return [tuple(sorted(b)) for b in blocks]


def quantum_cost(c: QuantumCircuit) -> int:
    return len(gate_blocks(c))


def depth_of(line_sets: Iterable[Sequence[int]]) -> int:
    frontier = {}
    depth = 0
    for lines in line_sets:
        d = 1 + max((frontier.get(l, 0) for l in lines), default=0)
        for l in lines:
            frontier[l] = d
        depth = max(depth, d)
    return depth


def logical_depth(c: QuantumCircuit, merge: bool = True) -> int:
    if merge:
        return depth_of(gate_blocks(c))
    return depth_of(p.lines for p in c.prims)


@dataclass(frozen=True)
class Metrics:
    quantum_cost: int
    delay: int
    garbage: int
    gate_count: int
    serial_delay: int = 0
    ncv_count: int = 0

    def __post_init__(self):
        if min(self.quantum_cost, self.delay, self.garbage, self.gate_count) < 0:
            raise ValueError("metrics must be non-negative")


def circuit_metrics(c: QuantumCircuit) -> Metrics:
    qc = quantum_cost(c)
    return Metrics(qc, logical_depth(c), 0, len(c.prims), qc, len(c.prims))


# -- decomposition registry ------------------------------------------------

def _C(width, text):
    return QuantumCircuit.parse(width, text)


@dataclass(frozen=True)
class Decomposition:
    name: str
    circuit: QuantumCircuit
    provenance: str = field(default="", compare=False)


# Lines: 0 = A, 1 = B, 2 = C.  FRG / SAM / MPG entries are the output of
# synth.min_cost_synthesis (minimum NCV count, then minimum 2x2 cost, then
# lexicographically smallest primitive-index sequence); test_synth checks
# that a fresh search reproduces each of them.
_REGISTRY = {
    "NOT": Decomposition("NOT", _C(1, "X(0)"), "single NOT"),
    "FG": Decomposition("FG", _C(2, "CX(0,1)"), "single CNOT"),
    "DFG": Decomposition("DFG", _C(3, "CX(0,1) CX(0,2)"), "two CNOTs sharing control A"),
    "TG": Decomposition("TG", _C(3, "CV(1,2) CX(0,1) CVDG(1,2) CX(0,1) CV(0,2)"), "standard 5-gate Toffoli"),
    "PG": Decomposition("PG", _C(3, "CV(1,2) CV(0,2) CX(0,1) CVDG(1,2)"), "standard 4-gate Peres"),
    "FRG": Decomposition(
        "FRG", _C(3, "CX(0,1) CX(1,2) CV(2,1) CX(0,2) CV(0,1) CVDG(2,1) CX(1,2)"), "synthesized"
    ),
    "SAM": Decomposition(
        "SAM", _C(3, "CX(1,2) CV(2,1) CX(0,2) CVDG(0,1) X(0) CVDG(2,1) CX(1,2)"), "synthesized"
    ),
    "MPG": Decomposition(
        "MPG", _C(3, "CX(1,2) CV(2,1) CX(0,2) CV(0,1) X(0) CV(2,1)"), "synthesized with derive_mpg"
    ),
}

REGISTERED_NAMES = tuple(_REGISTRY)


def registered_decomposition(name: str) -> QuantumCircuit:
    try:
        return _REGISTRY[name.upper()].circuit
    except KeyError:
        raise UnknownGateError(f"no registered decomposition for {name!r}") from None


def registry_entry(name: str) -> Decomposition:
    registered_decomposition(name)
    return _REGISTRY[name.upper()]


@dataclass(frozen=True)
class RegistryCheck:
    name: str
    equivalent: bool
    unitary: bool
    ncv_count: int
    quantum_cost: int
    depth: int
    claimed_cost: Optional[int]

    @property
    def cost_ok(self) -> bool:
        return self.claimed_cost is None or self.quantum_cost == self.claimed_cost

    @property
    def passed(self) -> bool:
        return self.equivalent and self.unitary and self.cost_ok


def verify_registry(names: Optional[Sequence[str]] = None) -> List[RegistryCheck]:
    out = []
    for name in names or REGISTERED_NAMES:
        circ = registered_decomposition(name)
        gate = builtin_gate(name)
        u = circuit_unitary(circ)
        out.append(RegistryCheck(
            name=gate.name,
            equivalent=equals_permutation(u, gate.perm),
            unitary=is_unitary(u),
            ncv_count=primitive_count(circ),
            quantum_cost=quantum_cost(circ),
            depth=logical_depth(circ),
            claimed_cost=gate.claimed_cost,
        ))
    return out
