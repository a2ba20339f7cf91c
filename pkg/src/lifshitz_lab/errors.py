"""Exception types raised across the package."""


class LifshitzLabError(Exception):
    """Base class for all package errors."""


class DomainError(LifshitzLabError, ValueError):
    """Argument outside the domain of a function (pole, branch point, bad sign)."""


class PoleError(DomainError):
    """Evaluation at or numerically indistinguishable from a pole."""


class UnsupportedOrderError(LifshitzLabError, ValueError):
    pass


class ClassificationAmbiguousError(LifshitzLabError):
    """Two roots collided while continuing the cubic in gamma."""


class TrackingLostError(LifshitzLabError):
    """Branch continuation took a step that could not be matched unambiguously."""


class NoCollisionError(LifshitzLabError):
    pass


class BranchError(LifshitzLabError):
    """Square-root or logarithm branch could not be continued consistently."""


class DegenerateLoopError(LifshitzLabError):
    pass


class ConvergenceError(LifshitzLabError, ArithmeticError):
    """A sum, quadrature or iteration failed to reach its tolerance."""


class MismatchError(LifshitzLabError):
    """Two independently computed quantities disagree beyond tolerance."""


class StepTooLargeError(ConvergenceError):
    pass


class FitUnstableError(ConvergenceError):
    pass


class ConfigError(LifshitzLabError, ValueError):
    """Invalid run configuration (CLI)."""
