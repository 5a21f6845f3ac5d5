"""Exception types shared across the package."""


class CompdetError(Exception):
    """Base class for all errors raised by this package."""


class FieldError(CompdetError, ValueError):
    """Invalid finite-field context or element."""


class NotADivisor(CompdetError, ValueError):
    """A row count was requested that does not divide the group order."""


class DomainError(CompdetError, ValueError):
    """An argument lies outside the mathematical domain of a formula."""


class SingularGram(CompdetError, ArithmeticError):
    """Cholesky factorization of a Gram matrix failed."""


class SingularCovariance(CompdetError, ArithmeticError):
    """Cholesky factorization of a compressed-statistic covariance failed."""


class ConfigError(CompdetError, ValueError):
    """An experiment or CLI configuration violates its invariants."""


class NumericalFailure(CompdetError, RuntimeError):
    """A simulation had to give up (e.g. too many discarded trials)."""
