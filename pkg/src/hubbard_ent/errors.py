"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a routine is defined."""


class CapacityError(ValueError):
    """A problem is too large for the dense exact-diagonalization path."""


class ConvergenceError(RuntimeError):
    """An iterative routine stopped before meeting its tolerance.

    ``partial`` holds the last iterate (or partial sum) and ``error`` the
    residual or error estimate at that point.
    """

    def __init__(self, message, partial=None, error=None):
        super().__init__(message)
        self.partial = partial
        self.error = error


class SingularJacobianError(ConvergenceError):
    """Newton step could not be taken because the Jacobian is singular."""


class DegenerateStateError(RuntimeError):
    """The ground state is degenerate, so local populations are ambiguous."""
