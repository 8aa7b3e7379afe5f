"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ShapeError(ValueError):
    """An array or state has the wrong dimension or mode count."""


class ConvergenceError(RuntimeError):
    """An iterative numerical routine ran out of budget.

    The best available estimate is kept on ``result`` so callers can decide
    whether it is usable.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
