"""Exception hierarchy shared by every module."""


class ExdError(Exception):
    """Base class for all library errors."""


class DomainError(ExdError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class RangeError(ExdError, ValueError):
    """An order or count exceeds the supported range."""


class SingularityError(DomainError):
    """Evaluation requested at (or beyond) a singular turning point."""


class SolverError(ExdError, RuntimeError):
    """A root finder failed to converge."""


class ConvergenceError(ExdError, RuntimeError):
    """Adaptive quadrature ran out of its subdivision budget.

    The best available estimate is kept on ``value`` and ``error_estimate``.
    """

    def __init__(self, message, value=float("nan"), error_estimate=float("inf")):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class EvaluationError(ExdError, ArithmeticError):
    """The integrand returned a non-finite value."""

    def __init__(self, message, abscissa=float("nan")):
        super().__init__(message)
        self.abscissa = abscissa


class DegenerateDensityError(ExdError, ArithmeticError):
    """A density integrates to zero (or to something non-positive)."""


class DivergenceError(ExdError, ArithmeticError):
    """A requested moment does not exist."""


class AdmissibilityError(ExdError, ValueError):
    """A candidate density violated one or more admissibility conditions.

    The full report is attached as ``report``.
    """

    def __init__(self, report):
        names = list(dict.fromkeys(v[0] for v in report.violations)) or ["unknown"]
        noun = "condition" if len(names) == 1 else "conditions"
        super().__init__(f"inadmissible density: {', '.join(names)} {noun} violated")
        self.report = report


class ConfigError(ExdError, ValueError):
    """Malformed descriptor or configuration file."""
