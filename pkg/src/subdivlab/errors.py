"""Exception types shared across the package."""


class SubdivlabError(Exception):
    """Base class for all package-specific errors."""


class InputError(SubdivlabError, ValueError):
    """A caller-supplied argument violates an operation's preconditions."""


class DomainError(InputError):
    """Parameters fall outside a formula's mathematical domain."""


class DegenerateInputError(InputError):
    """An iterative procedure prescribed an empty or non-shrinking set.

    Raised when a floor rule would empty an intermediate vertex set (or fail
    to shrink it), so the reduction cannot proceed meaningfully.
    """


class CapacityError(SubdivlabError):
    """A requested object exceeds a configured size limit."""


class BudgetExceededError(SubdivlabError):
    """A search exhausted its node budget before reaching a verdict.

    Distinct from a negative result: the search is inconclusive.
    """

    def __init__(self, message: str, nodes: int | None = None):
        super().__init__(message)
        self.nodes = nodes


class StructuralError(SubdivlabError):
    """A structural guarantee of a procedure failed to materialize."""


class InvariantViolation(SubdivlabError):
    """An asserted mathematical invariant failed on concrete data.

    These indicate a bug or a genuinely out-of-contract instance; they are
    never expected to fire on inputs satisfying the documented hypotheses.
    """
