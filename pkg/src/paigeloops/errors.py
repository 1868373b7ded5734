"""Error taxonomy shared by every module.

DomainError covers bad mathematical input (wrong field, malformed table),
LimitError covers inputs that exceed a configured size bound and carries the
bound that was hit, InternalError flags broken invariants that indicate a bug
rather than bad input.
"""


class DomainError(ValueError):
    """Input outside the mathematical domain of the operation."""


class LimitError(RuntimeError):
    """Input exceeds a configured size bound; carries the bound."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class MalformedTableError(DomainError):
    """A .tbl file or raw table does not parse into an n x n integer array."""


class NotLatinError(DomainError):
    """A candidate Cayley table has a repeated entry in some row or column."""


class NoIdentityAtZeroError(DomainError):
    """A candidate Cayley table has no two-sided identity at index 0."""


class NotMoufangNetError(DomainError):
    """A 3-net whose Bol reflections are not all collineations was passed to
    a construction that requires a Moufang net."""


class CorrespondenceError(RuntimeError):
    """A collineation that should correspond to a loop automorphism does not."""


class InternalError(RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
