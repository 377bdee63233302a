"""Exception types shared by all solvers."""


class InstanceError(ValueError):
    """The problem instance violates its schema or preconditions."""


class ResourceLimitError(RuntimeError):
    """A table, state space, or guard budget would be exceeded."""


class InvariantViolation(RuntimeError):
    """An internal data-structure invariant was broken (a logic error)."""
