"""Exception types shared across the package."""


class DegenerateInputError(ValueError):
    """Input is identically zero where a nonzero object is required."""


class CapacityError(ValueError):
    """Requested computation exceeds a configured enumeration/size budget."""


class RegimeError(ValueError):
    """A regime hypothesis is violated; the message names the inequality."""


class InvariantViolationError(RuntimeError):
    """A mathematically guaranteed inequality failed numerically.

    Raised only for conditions that are theorems; seeing this indicates
    an implementation bug, not bad input.
    """
