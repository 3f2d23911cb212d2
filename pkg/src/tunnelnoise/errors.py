"""Exception hierarchy shared by all tunnelnoise modules.

Each class maps to one command-line exit code, so library errors surface
with stable semantics when the package is driven from a shell.
"""

__all__ = [
    "TunnelNoiseError",
    "UsageError",
    "DomainError",
    "RangeError",
    "ConsistencyError",
]


class TunnelNoiseError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(TunnelNoiseError):
    """The caller asked for something malformed (bad flags, bad config).

    Maps to exit code 2.
    """


class DomainError(TunnelNoiseError):
    """Inputs are well-formed but physically out of domain.

    Examples: E >= V0 for a tunneling solution, non-positive gap,
    negative temperature.  Maps to exit code 3.
    """


class RangeError(DomainError):
    """A computation would overflow or lose all precision.

    Raised instead of returning Inf/NaN; the message names the offending
    scale so the caller can switch to a scaled entry point.  Subclass of
    DomainError and shares exit code 3.
    """


class ConsistencyError(TunnelNoiseError):
    """An internal cross-check failed; results cannot be trusted.

    Maps to exit code 4.
    """
