"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """A line of an edge-list stream could not be parsed."""

    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class ValidationError(ValueError):
    """Inputs violate a documented precondition."""


class BudgetExceededError(RuntimeError):
    """An exact/dense computation would exceed its configured size budget."""
