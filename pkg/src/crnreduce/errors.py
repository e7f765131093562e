"""Exception hierarchy shared by all modules."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """1-based line and column of a source fragment."""

    line: int
    column: int
    length: int


class CRNError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CRNError, ValueError):
    """A network fails the structural requirements of the formalism."""


class ReactantEqualsProduct(ValidationError):
    def __init__(self, index: int, reaction: object):
        self.index = index
        self.reaction = reaction
        super().__init__(f"reaction {index + 1} ({reaction}) has identical reactant and product")


class EmptyNetwork(ValidationError):
    def __init__(self) -> None:
        super().__init__("network has no reactions")


class DimensionMismatch(CRNError, ValueError):
    pass


class TooLarge(CRNError, ValueError):
    """Raised by the exponential oracles when the input exceeds their bound."""


class PreconditionViolated(CRNError, ValueError):
    pass


class NotALoop(CRNError, ValueError):
    pass


class StaleCandidate(CRNError, ValueError):
    """The intermediate candidate no longer describes the network it is applied to."""


class GenerationFailed(CRNError, RuntimeError):
    pass


class ParseError(CRNError, ValueError):
    """Syntax or validation error with a 1-based source span."""

    def __init__(self, message: str, line: int, column: int, length: int = 1):
        self.message = message
        self.line = line
        self.column = column
        self.length = length
        super().__init__(f"line {line}, column {column}: {message}")

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.column, self.length)
