"""Exception hierarchy shared by every module."""

from __future__ import annotations


class IforgeError(Exception):
    """Base class for all library errors."""


class ContractError(IforgeError, ValueError):
    """An operation was called with arguments violating its precondition."""


class StructureFormatError(IforgeError, ValueError):
    """A structure or partition document could not be parsed."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class StructureValidationError(IforgeError, ValueError):
    """A document parsed but describes an invalid structure."""


class BudgetExhausted(IforgeError):
    """The morphism search hit its node-expansion budget before deciding."""

    def __init__(self, budget: int):
        super().__init__(f"budget exhausted after {budget} node expansions")
        self.budget = budget
