"""Exception types shared across the package."""


class TrackapxError(Exception):
    """Base class for all package-specific errors."""


class GraphError(TrackapxError):
    """Malformed graph input (self-loop, bad index, nonpositive weight, cycle
    where a forest is required, ...)."""


class CapExceeded(TrackapxError):
    """An enumeration or brute-force search exceeded its configured cap.

    Caps fail loudly on purpose: oracles and verifiers define ground truth,
    so silently sampling or truncating would corrupt every downstream claim.
    """


class InfeasibleInstance(TrackapxError):
    """The instance provably has no solution (e.g. a cycle of length <= r
    for fault tolerance level r).  Carries a witness when one exists."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(TrackapxError):
    """Instance file rejected; message pinpoints the offending line."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
