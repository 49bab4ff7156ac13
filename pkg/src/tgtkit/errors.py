"""Exception hierarchy shared by the library and the CLI.

Each error class carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class TGTError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ValidationError(TGTError):
    """Bad parameters, malformed input files, or violated preconditions."""

    exit_code = 1


class FeasibilityError(TGTError):
    """A combinatorial feasibility cap or retry budget was exceeded."""

    exit_code = 2


class EnvelopeDefectError(TGTError):
    """A guarantee envelope failed on a verified matrix (should be impossible)."""

    exit_code = 3
