"""Reversible gates as permutations of basis codes.

Bit ordering: line 0 (input ``A``) is the most significant bit of a code, so
code ``0b101`` is the truth-table row A=1, B=0, C=1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Tuple

from .errors import MalformedTableError, UnknownGateError, WidthMismatchError


Bits = Tuple[int, ...]


def encode(bits: Sequence[int]) -> int:
    """Pack a bit vector into its integer code (index 0 is the MSB)."""
    code = 0
    for b in bits:
        if b not in (0, 1, True, False):
            raise ValueError(f"bit value must be 0 or 1, got {b!r}")
        code = (code << 1) | int(b)
    return code


def decode(code: int, width: int) -> Bits:
    if not 0 <= code < (1 << width):
        raise ValueError(f"code {code} out of range for width {width}")
    return tuple((code >> (width - 1 - i)) & 1 for i in range(width))


def _check_table(table: Sequence[int]) -> int:
    n = len(table)
    if n == 0 or n & (n - 1):
        raise MalformedTableError(f"table length {n} is not a power of two")
    for i, v in enumerate(table):
        if not isinstance(v, int) or not 0 <= v < n:
            raise MalformedTableError(f"entry {i} = {v!r} out of range 0..{n - 1}")
    return n.bit_length() - 1


def is_bijective(table: Sequence[int]) -> bool:
    """True iff every output code appears exactly once."""
    _check_table(table)
    return len(set(table)) == len(table)


@dataclass(frozen=True)
class Permutation:
    width: int
    map: Tuple[int, ...]

    def __post_init__(self):
        w = _check_table(self.map)
        if w != self.width:
            raise WidthMismatchError(f"map of length {len(self.map)} does not match width {self.width}")
        if len(set(self.map)) != len(self.map):
            raise MalformedTableError("map is not a bijection")
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))

    @classmethod
    def identity(cls, width: int) -> "Permutation":
        return cls(width, tuple(range(1 << width)))

    @classmethod
    def from_function(cls, width: int, fn: Callable[..., Sequence[int]]) -> "Permutation":
        """Build from a function of ``width`` bits returning ``width`` bits."""
        return cls(width, tuple(encode(fn(*decode(x, width))) for x in range(1 << width)))

    def __call__(self, code: int) -> int:
        return self.map[code]

    def __len__(self) -> int:
        return len(self.map)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.map)
        for i, j in enumerate(self.map):
            inv[j] = i
        return Permutation(self.width, tuple(inv))

    def then(self, other: "Permutation") -> "Permutation":
        """Apply ``self`` first, then ``other``."""
        if other.width != self.width:
            raise WidthMismatchError("cannot compose permutations of different width")
        return Permutation(self.width, tuple(other.map[v] for v in self.map))

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.map))

    def column(self, index: int) -> Bits:
        if not 0 <= index < self.width:
            raise IndexError(f"output index {index} out of range for width {self.width}")
        shift = self.width - 1 - index
        return tuple((v >> shift) & 1 for v in self.map)


@dataclass(frozen=True)
class GateDef:
    name: str
    width: int
    perm: Permutation
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    claimed_cost: Optional[int] = None
    note: str = field(default="", compare=False)

    def __post_init__(self):
        if self.perm.width != self.width:
            raise WidthMismatchError(f"{self.name}: permutation width {self.perm.width} != {self.width}")
        if len(self.inputs) != self.width or len(self.outputs) != self.width:
            raise WidthMismatchError(f"{self.name}: port label count must equal width")

    def truth_table(self) -> list:
        """Rows of (input bits, output bits) in code order."""
        return [(decode(x, self.width), decode(y, self.width)) for x, y in enumerate(self.perm.map)]


def apply_gate(gate: GateDef, bits: Sequence[int]) -> Bits:
    if len(bits) != gate.width:
        raise WidthMismatchError(f"{gate.name} expects {gate.width} bits, got {len(bits)}")
    return decode(gate.perm.map[encode(bits)], gate.width)


def output_column(gate: GateDef, index: int) -> Bits:
    return gate.perm.column(index)


def is_balanced(column: Sequence[int]) -> bool:
    return 2 * sum(column) == len(column)


# SAM truth table, rows A B C = 000 .. 111, outputs P Q R.  This table is the
# definition; the closed form is P = ~A, Q = ~A.B ^ A.~C, R = ~A.C ^ A.B.
SAM_TABLE = (
    (1, 0, 0),
    (1, 0, 1),
    (1, 1, 0),
    (1, 1, 1),
    (0, 1, 0),
    (0, 0, 0),
    (0, 1, 1),
    (0, 0, 1),
)

# Printed formula Q = ~A.B ^ ~A.C.  Not a bijection; kept only so the
# conflict with the table can be demonstrated and reported.
def sam_printed_formula(a: int, b: int, c: int) -> Bits:
    na = 1 - a
    return (na, (na & b) ^ (na & c), (na & c) ^ (a & b))


# Frozen output of synth.derive_mpg() (constraint search over all 8! maps,
# objective (NCV count, 2x2 quantum cost, map)).  Closed form:
# P = ~A, Q = A.~B ^ ~A.C, R = A ^ B ^ C.  test_synth re-derives it.
MPG_MAP = (4, 7, 5, 6, 3, 2, 0, 1)


def _gate(name, width, fn_or_map, inputs, outputs, cost, note=""):
    if callable(fn_or_map):
        perm = Permutation.from_function(width, fn_or_map)
    else:
        perm = Permutation(width, tuple(fn_or_map))
    return GateDef(name, width, perm, tuple(inputs), tuple(outputs), cost, note)


_ABC = ("A", "B", "C")
_PQR = ("P", "Q", "R")

_BUILTINS = {
    "NOT": _gate("NOT", 1, lambda a: (1 - a,), ("A",), ("P",), 1),
    "FG": _gate("FG", 2, lambda a, b: (a, a ^ b), ("A", "B"), ("P", "Q"), 1, "Feynman / CNOT"),
    "DFG": _gate("DFG", 3, lambda a, b, c: (a, a ^ b, a ^ c), _ABC, _PQR, 2, "double Feynman"),
    "TG": _gate("TG", 3, lambda a, b, c: (a, b, (a & b) ^ c), _ABC, _PQR, 5, "Toffoli"),
    "FRG": _gate(
        "FRG", 3,
        lambda a, b, c: (a, ((1 - a) & b) ^ (a & c), ((1 - a) & c) ^ (a & b)),
        _ABC, _PQR, 5, "Fredkin (controlled swap)",
    ),
    "PG": _gate("PG", 3, lambda a, b, c: (a, a ^ b, (a & b) ^ c), _ABC, _PQR, 4, "Peres"),
    "SAM": _gate("SAM", 3, [encode(r) for r in SAM_TABLE], _ABC, _PQR, 4, "truth table is normative"),
    "MPG": _gate("MPG", 3, MPG_MAP, _ABC, _PQR, None, "reconstructed by constrained synthesis"),
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_gate(name: str) -> GateDef:
    try:
        return _BUILTINS[name.upper()]
    except KeyError:
        raise UnknownGateError(f"unknown gate {name!r}; known: {', '.join(BUILTIN_NAMES)}") from None


def iter_builtin_gates() -> Iterable[GateDef]:
    return iter(_BUILTINS.values())
