"""Reversible gate library, NCV cost certification and reversible latch verification."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    IllegalInputError,
    MalformedTableError,
    NetlistSyntaxError,
    OscillationError,
    RevseqError,
    SearchBoundError,
    SynthesisFailure,
    UnknownGateError,
)
from .perm import GateDef, Permutation, apply_gate, builtin_gate, is_bijective, output_column  # noqa: E402
from .quantum import (  # noqa: E402
    Primitive,
    QuantumCircuit,
    circuit_unitary,
    equals_permutation,
    logical_depth,
    quantum_cost,
    registered_decomposition,
    verify_registry,
)
from .netlist import Netlist, evaluate, metrics, parse_netlist, serialize  # noqa: E402
from .sequential import builtin_design, clock_step, settle, verify_characteristic  # noqa: E402
from .claims import claims_ledger, improvement_percent, render_report  # noqa: E402
