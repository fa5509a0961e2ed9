"""Custom exception classes.

``ToolError`` is what tools raise towards the MCP layer. Everything the
computational library raises derives from ``SftError`` and carries the exit
code the command line reports for it.
"""

from __future__ import annotations

from typing import Any, Optional


class ToolError(Exception):
    """Standard tool error."""


class SftError(Exception):
    """Base class for errors raised by the ``sft`` library."""

    exit_code: int = 2
    kind: str = "sft_error"

    def to_dict(self) -> dict[str, Any]:
        """Serialize for JSON reports."""
        return {"type": self.kind, "message": str(self), "exit_code": self.exit_code}


class DimensionError(SftError):
    """Matrix shapes do not fit the requested operation."""

    kind = "dimension_error"


class MalformedInputError(SftError):
    """Input text or document does not follow the expected grammar."""

    kind = "malformed_input"

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        source: Optional[str] = None,
    ) -> None:
        self.line = line
        self.column = column
        self.source = source
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
        if source:
            location = f"{source}: {location}" if location else source
        super().__init__(f"{location}: {message}" if location else message)

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        data.update({"line": self.line, "column": self.column})
        return data


class NotRealizableError(SftError):
    """A trace sequence or spectrum has no integral realization."""

    kind = "not_realizable"


class DomainError(SftError):
    """Argument outside the mathematical domain of the operation."""

    kind = "domain_error"


class PreconditionError(SftError):
    """Operation precondition does not hold."""

    kind = "precondition_error"


class NotIrreducibleError(PreconditionError):
    kind = "not_irreducible"


class FamilyMismatchError(PreconditionError):
    kind = "family_mismatch"


class NotAutomorphismError(PreconditionError):
    kind = "not_automorphism"


class InapplicableError(SftError):
    """The question has no answer for this input (reported, not a failure)."""

    kind = "inapplicable"


class IllegalMoveError(SftError):
    """A positive-equivalence move leaves its declared class."""

    kind = "illegal_move"

    def __init__(self, message: str, entry: Optional[tuple[int, int]] = None) -> None:
        self.entry = entry
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        data["entry"] = list(self.entry) if self.entry is not None else None
        return data


class VerificationError(SftError):
    """A certificate failed verification where success was required."""

    kind = "verification_error"
    exit_code = 1

    def __init__(
        self,
        message: str,
        index: Optional[int] = None,
        equation: Optional[str] = None,
    ) -> None:
        self.index = index
        self.equation = equation
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        data.update({"index": self.index, "equation": self.equation})
        return data


class BudgetExceededError(SftError):
    """A combinatorial or time budget ran out before the computation ended."""

    kind = "budget_exceeded"
    exit_code = 3

    def __init__(self, message: str, partial: Any = None) -> None:
        self.partial = partial
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        data["partial"] = self.partial is not None
        return data


__all__ = [
    "ToolError",
    "SftError",
    "DimensionError",
    "MalformedInputError",
    "NotRealizableError",
    "DomainError",
    "PreconditionError",
    "NotIrreducibleError",
    "FamilyMismatchError",
    "NotAutomorphismError",
    "InapplicableError",
    "IllegalMoveError",
    "VerificationError",
    "BudgetExceededError",
]
