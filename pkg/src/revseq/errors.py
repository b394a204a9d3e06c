"""Exception types shared across the workbench."""


class RevseqError(Exception):
    """Base class for all workbench errors."""


class MalformedTableError(RevseqError, ValueError):
    """A raw output table is not a power-of-two length or has out-of-range codes."""


class WidthMismatchError(RevseqError, ValueError):
    pass


class UnknownGateError(RevseqError, KeyError):
    pass


class NetlistSyntaxError(RevseqError, ValueError):
    """Netlist text could not be parsed.

    ``kind`` distinguishes the diagnostic (``syntax``, ``unknown-gate``,
    ``arity``, ``duplicate-line``, ``index-range``, ...).
    """

    def __init__(self, message, line=None, column=None, kind="syntax"):
        self.line = line
        self.column = column
        self.kind = kind
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(f"{where}{message}")


class UnassignedInputError(RevseqError, KeyError):
    pass


class IllegalInputError(RevseqError, ValueError):
    """Inputs violate a latch's legal-input predicate (e.g. S = R = 1)."""


class OscillationError(RevseqError, RuntimeError):
    """Feedback iteration revisited a state without reaching a fixed point."""


class SearchBoundError(RevseqError, ValueError):
    """Requested exhaustive search exceeds the configured desk-scale bounds."""


class SynthesisFailure(RevseqError, RuntimeError):
    pass
