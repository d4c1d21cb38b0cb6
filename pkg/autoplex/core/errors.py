"""
Exception hierarchy.

Every error carries the process exit code the CLI should use for it.
"""

from typing import Optional, Tuple


class AutoplexError(Exception):
    """Base class for all autoplex failures."""

    exit_code = 1


class DomainError(AutoplexError, ValueError):
    """A precondition or domain restriction was violated."""

    exit_code = 2


class BracketError(DomainError):
    """The polynomial does not change sign on the bracket."""


class ConstructionError(AutoplexError):
    """A loop schedule could not be turned into a verified witness."""

    exit_code = 2


class BudgetExceeded(AutoplexError):
    """The time budget ran out before the search finished."""

    exit_code = 3

    def __init__(self, message: str, interval: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.interval = interval


class CheckpointError(AutoplexError):
    """A checkpoint file is corrupt or belongs to another search."""


class CacheInconsistency(AutoplexError):
    """A recomputed value disagrees with the results cache."""

    exit_code = 4
