"""Exception types raised by anyonbraid."""


class AnyonBraidError(Exception):
    """Base class for all library errors."""


class InvalidLatticeError(AnyonBraidError, ValueError):
    """A lattice description is malformed (bad dimensions, ids or indices)."""


class StabilizerError(AnyonBraidError, ValueError):
    """Invalid input to the stabilizer engine (sizes, signs, generator sets)."""


class CapExceededError(AnyonBraidError, ValueError):
    """The dense simulator was asked for more qubits than its cap allows."""


class ProtocolError(AnyonBraidError):
    """A protocol was misused, e.g. an open braiding loop."""
