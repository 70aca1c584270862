"""Exception hierarchy for petalknot.

Every error raised on purpose by the library derives from ``PetalKnotError``
and carries the process exit code the CLI reports for it.
"""

from typing import Optional

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_VERIFICATION = 4


class PetalKnotError(Exception):
    """Base class for petalknot errors."""

    exit_code: int = 1


class InvalidInputError(PetalKnotError, ValueError):
    """Malformed user input (permutation text, JSON payloads, CLI values)."""

    exit_code = EXIT_INPUT

    def __init__(self, message: str, position: Optional[int] = None) -> None:
        if position is not None:
            message = f"{message} (position {position})"
        super().__init__(message)
        self.position = position


class InvalidDiagramError(PetalKnotError, ValueError):
    """A diagram violates one of its structural invariants."""

    exit_code = EXIT_INPUT


class HandednessConflictError(InvalidDiagramError):
    """The ribbons selected for composition have the same handedness."""


class DegenerateScheduleError(PetalKnotError):
    """A perturbation schedule produced coincident or near-coincident intersections."""

    exit_code = EXIT_VERIFICATION


class BudgetExceededError(PetalKnotError):
    """An exponential invariant computation exceeded its crossing budget."""

    exit_code = EXIT_BUDGET

    def __init__(self, crossings: int, budget: int) -> None:
        super().__init__(f"diagram has {crossings} crossings, bracket budget is {budget}")
        self.crossings = crossings
        self.budget = budget


class VerificationError(PetalKnotError):
    """An internal certificate check failed."""

    exit_code = EXIT_VERIFICATION
