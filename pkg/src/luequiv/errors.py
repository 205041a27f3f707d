"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An operation was asked to act on input violating its preconditions."""


class ResourceLimitError(RuntimeError):
    """A configured enumeration cap or node budget was exceeded.

    Raised instead of returning a possibly wrong answer.
    """


class ClassAlphaUnresolved(RuntimeError):
    """The solver met an all-odd-degree component it cannot settle exactly."""
