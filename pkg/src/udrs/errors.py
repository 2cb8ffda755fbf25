"""Exception types shared across the package.

Everything raised on purpose derives from UdrsError, so callers (and the
CLI) can distinguish engine verdicts from genuine bugs.
"""

from __future__ import annotations

from dataclasses import dataclass


class UdrsError(Exception):
    """Base class for all errors raised by this package."""


# --- input / syntax ---------------------------------------------------------


@dataclass(frozen=True)
class SourceSpan:
    """Location of a piece of concrete syntax: 1-based line/column plus byte offsets."""

    line: int
    column: int
    start: int
    end: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


class ParseError(UdrsError):
    def __init__(self, message: str, span: SourceSpan, expected: tuple[str, ...] = ()):
        self.span = span
        self.expected = expected
        detail = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{span}: {message}{detail}")


class DuplicateLabel(ParseError):
    pass


class UnresolvedLabel(ParseError):
    pass


class UnknownSort(ParseError):
    pass


# --- structural lookups -----------------------------------------------------


class UnknownLabel(UdrsError):
    pass


class UnknownReferent(UdrsError):
    pass


# --- order / well-formedness ------------------------------------------------


class ConstraintError(UdrsError):
    """A constraint addition would break well-formedness; the input is unchanged."""


class LowerBoundViolation(ConstraintError):
    """Some label would end up below both the restrictor and the scope of a
    quantifier/implication (the free-variable constraint), or below a clause's
    lower bound."""


class SemilatticeViolation(ConstraintError):
    """The label order would stop being an upper semilattice with a single top."""


class ClauseEscape(ConstraintError):
    """A proper quantifier would outscope the top of its clause."""


# --- disambiguation operators -----------------------------------------------


class NotPotentiallyScopeBearing(UdrsError):
    pass


class NoGroupReferent(UdrsError):
    pass


class NotSameClause(UdrsError):
    pass


class NotAPronoun(UdrsError):
    pass


class Inaccessible(UdrsError):
    pass


class NoLicensingCondition(UdrsError):
    pass


class WrongClause(UdrsError):
    pass


class NotLowerBound(UdrsError):
    pass


class PartialMapping(UdrsError):
    pass


class SharedResponsibilityUnsupported(UdrsError):
    """Shared-responsibility readings are a lexical-theory matter; we refuse them."""


# --- readings / evaluation ---------------------------------------------------


class ReadingMismatch(UdrsError):
    pass


class UnboundReferent(UdrsError):
    pass


class TagMismatch(UdrsError):
    pass


class EmptyAbstraction(UdrsError):
    """A sum abstraction has no witnesses; the join over an empty set is undefined."""


# --- co-indexing / consequence ----------------------------------------------


class NotAClause(UdrsError):
    pass


class NoIsomorphism(UdrsError):
    pass


class CoindexViolation(UdrsError):
    pass
