"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 1, numerical
failures exit 2.
"""


class ValidationError(ValueError):
    """An input violates a documented precondition or structural invariant."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract."""


class EigenSolverError(NumericalError):
    """Eigensolver failure carrying whatever partial results were recovered.

    ``partial`` holds the (eigenvalue, eigenvector) pairs that did satisfy the
    residual bound; it is empty when the backend diverged outright.
    """

    def __init__(self, message: str, partial=()):
        super().__init__(message)
        self.partial = list(partial)
