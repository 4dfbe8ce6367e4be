"""Shared exception types.

The library distinguishes four failure kinds: malformed input, inputs that
violate a documented precondition, work that would exceed a configured
brute-force cap, and internal construction checks that did not hold.  The CLI
maps these onto exit codes (verification failures -> 2, capacity -> 3).
"""


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class PreconditionError(ValueError):
    """Structurally valid input that violates an operation's precondition."""


class NotALatticeError(PreconditionError):
    """A poset is not a lattice; carries a witness pair lacking a meet/join."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CapacityError(RuntimeError):
    """An exhaustive search or enumeration would exceed its configured cap."""


class VerificationError(RuntimeError):
    """A constructed object failed its own validity check."""
