"""Exception types shared across the package."""


class MKdVError(Exception):
    """Base class for all package errors."""


class DomainError(MKdVError, ValueError):
    """An argument lies outside the domain of the operation.

    ``edge`` optionally names the boundary that was violated, e.g.
    ``"xi_minus"`` or ``"xi_plus"`` for the elliptic-region edges.
    """

    def __init__(self, message, edge=None):
        super().__init__(message)
        self.edge = edge


class ContractError(MKdVError, ValueError):
    """A precondition on how a function is called was violated."""


class ConvergenceError(MKdVError, ArithmeticError):
    """An iterative or adaptive procedure failed to reach its tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ConsistencyError(MKdVError, ArithmeticError):
    """Two formulas that must agree did not."""

    def __init__(self, message, values=()):
        super().__init__(message)
        self.values = tuple(values)


class UnstableRunError(MKdVError, RuntimeError):
    """The direct solver blew up; ``last_good`` holds the last finite slice."""

    def __init__(self, message, t, last_good=None):
        super().__init__(message)
        self.t = t
        self.last_good = last_good


class ComparisonError(MKdVError):
    """A comparison report failed its acceptance thresholds."""
