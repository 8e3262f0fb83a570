"""
Error hierarchy shared by every multipoint_lab app.

Numerical preconditions raise subclasses of ``ValueError`` so that callers
outside the project can catch them the usual way; the management commands
turn any ``MultipointError`` into a ``CommandError``.
"""


class MultipointError(Exception):
    """Base class for all errors raised by multipoint_lab"""


class DomainError(MultipointError, ValueError):
    """An argument lies outside the domain of the operation"""


class DegenerateMatrixError(DomainError):
    """Duplicate or zero times make a covariance matrix singular"""


class DegenerateConditioningError(MultipointError, ArithmeticError):
    """The conditioning covariance matrix is numerically singular"""


class NotPositiveDefiniteError(MultipointError, ArithmeticError):
    """A covariance matrix failed its Cholesky factorization"""


class InvariantViolationError(MultipointError, AssertionError):
    """A bound that holds as a theorem was violated; signals a bug"""


class CoverageError(DomainError):
    """A path grid does not cover the configured time intervals"""


class InsufficientBatchesError(DomainError):
    """Too few paths to form the batch-means error estimate"""


class RemovableSingularityError(DomainError):
    """The closed form degenerates; use the quadrature oracle instead"""
