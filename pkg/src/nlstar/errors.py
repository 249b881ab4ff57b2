"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the admissible range of a function."""


class DivergenceError(DomainError):
    """The requested quantity is infinite (e.g. K(1))."""


class NoRoot(RuntimeError):
    """A scalar equation showed no sign change on the scanned interval."""

    def __init__(self, message, scan=None):
        super().__init__(message)
        self.scan = scan


class ConditionFailed(RuntimeError):
    """A sufficient existence condition does not hold for the given lengths."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DuplicateReducedLength(ValueError):
    """Two reduced lengths l_e / n_e coincide (within tolerance)."""


class ReducedGraphTooSmall(ValueError):
    """Removing equal-length pairs left fewer than three edges."""


class NoConvergence(RuntimeError):
    """Newton iteration did not reach the tolerance.

    ``best`` holds the best iterate and ``residual`` its residual norm.
    """

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class RangeEscape(RuntimeError):
    """A Newton step left the admissible parameter box despite damping."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class StepCollapse(RuntimeError):
    """The continuation step fell below its lower bound."""


class RuleViolation(RuntimeError):
    """A nodal jump at a central-Dirichlet crossing broke the min-rule."""

    def __init__(self, message, event=None):
        super().__init__(message)
        self.event = event
