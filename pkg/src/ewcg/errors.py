"""Exception hierarchy shared across the toolkit.

Each class maps to a CLI exit code so batch callers can dispatch on failure
kind without parsing messages.
"""

from __future__ import annotations


class EwcgError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 5


class ValidationError(EwcgError):
    """Malformed numeric input (bad PMF, bad matrix, symbol outside alphabet)."""

    exit_code = 2


class ConfigError(EwcgError):
    """Structurally invalid problem configuration (missing function entries,
    inconsistent alphabets, bad CLI options)."""

    exit_code = 2


class InfeasibleColoringError(EwcgError):
    """No valid a:b coloring exists for the requested palette and fold."""

    exit_code = 3

    def __init__(self, message: str, *, proven: bool = True):
        super().__init__(message)
        self.proven = proven


class CapacityError(EwcgError):
    """Instance exceeds a configured enumeration or search budget."""

    exit_code = 4


class AmbiguousLookupError(EwcgError):
    """A joint color class maps to more than one function output, so no
    lookup table can decode it."""

    exit_code = 5

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
