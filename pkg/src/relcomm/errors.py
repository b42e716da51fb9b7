"""Error types shared by the whole engine.

Every error carries a one-line, machine-readable ``reason``.  The CLI and
the HTTP service map these onto exit codes / status codes:

    ValidationFailure subclasses -> exit 1 / HTTP 400
    SizeGuardExceeded            -> exit 2 / HTTP 409
    InvariantViolation           -> exit 3 / HTTP 500
"""

from __future__ import annotations


class RelcommError(Exception):
    """Base class; ``reason`` is a single human+machine readable line."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason

    @property
    def kind(self) -> str:
        return type(self).__name__


class ValidationFailure(RelcommError):
    """Input documents or algebraic structures that fail validation."""


class SchemaError(ValidationFailure):
    """A document does not match the expected JSON schema."""


class ParseError(ValidationFailure):
    """Unparseable term, identity or polynomial string."""


class GroupAxiomViolation(ValidationFailure):
    """Operation tables break associativity, the unit law or inverses."""


class ConstantViolation(ValidationFailure):
    """An extra operation does not send the all-units tuple to the unit."""


class ValidationError(ValidationFailure):
    """Structure-level validation failure (homomorphism/action/ideal...)."""


class UnknownOperation(ValidationFailure):
    """A term refers to an operation missing from the signature."""


class ArityMismatch(ValidationFailure):
    """A term application or assignment has the wrong number of arguments."""


class SizeGuardExceeded(RelcommError):
    """A computation would exceed a configured size cap.

    Raised instead of silently degrading; the offending quantity and cap
    are part of the reason line.
    """


class InvariantViolation(RelcommError):
    """An internal mathematical invariant failed; always a bug or a
    falsified theorem, never a user error."""


EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SIZE_GUARD = 2
EXIT_INVARIANT = 3


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, SizeGuardExceeded):
        return EXIT_SIZE_GUARD
    if isinstance(exc, InvariantViolation):
        return EXIT_INVARIANT
    if isinstance(exc, ValidationFailure):
        return EXIT_VALIDATION
    return EXIT_INVARIANT
