"""Exception hierarchy shared by all modules."""


class PortesError(Exception):
    """Base class for every error raised by this package."""


# linalg
class NotPositiveDefinite(PortesError, ValueError):
    pass


class Singular(PortesError, ValueError):
    pass


# acf / statistics
class LagTooLarge(PortesError, ValueError):
    pass


class SingularCovariance(NotPositiveDefinite):
    """Residual covariance matrix is not positive definite."""


CovarianceSingular = SingularCovariance


class NonPositiveDeterminant(PortesError, ArithmeticError):
    """Block-Toeplitz correlation matrix has a non-positive determinant."""


class ZeroDenominator(PortesError, ArithmeticError):
    pass


# asymptotic
class DomainError(PortesError, ValueError):
    pass


# models
class EmptyOrder(PortesError, ValueError):
    pass


class RankDeficient(PortesError, ValueError):
    pass


class NonStationary(PortesError, ValueError):
    pass


class NonInvertible(PortesError, ValueError):
    pass


# montecarlo
class AdapterFitFailure(PortesError, RuntimeError):
    """A replicate refit failed on every retry stream."""

    def __init__(self, replicate, attempts, cause=None):
        self.replicate = replicate
        self.attempts = attempts
        self.cause = cause
        super().__init__(
            f"model refit failed for replicate {replicate} after {attempts} attempts: {cause!r}"
        )


# stable
class StableParamsInvalid(PortesError, ValueError):
    pass


class InvalidAlpha(StableParamsInvalid):
    pass


class InvalidBeta(StableParamsInvalid):
    pass


class DegenerateQuantiles(PortesError, ValueError):
    pass
