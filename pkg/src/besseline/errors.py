"""Exception types raised by the public API."""


class DomainError(ValueError):
    """Arguments violate an operation's hypotheses.

    ``hypothesis`` names the failed condition, e.g. ``"n < 1"``.
    """

    def __init__(self, message, hypothesis=None):
        super().__init__(message)
        self.hypothesis = hypothesis


class ConvergenceError(ArithmeticError):
    """An iterative method stopped before reaching its tolerance.

    The best available estimate is attached as ``estimate`` (an
    :class:`~besseline.EvalResult` or ``None``).
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
