from typing import Any, Optional


class EiscritError(Exception):
    """Base class of every error raised by the eiscrit packages."""


class DomainError(EiscritError, ValueError):
    pass


class CertificationError(EiscritError, ArithmeticError):
    def __init__(self, message: str, best_bound: Optional[float] = None):
        super().__init__(message)
        self.best_bound = best_bound


class ContradictionError(EiscritError, AssertionError):
    """A proved count or sign law failed numerically."""

    def __init__(self, law: str, expected: Any = None, observed: Any = None):
        super().__init__(f"{law}: expected {expected} observed {observed}")
        self.law = law
        self.expected = expected
        self.observed = observed


class InconsistencyError(EiscritError, ArithmeticError):
    pass


class ZeroOnCurveError(EiscritError, ArithmeticError):
    def __init__(self, message: str, parameter: Optional[float] = None):
        super().__init__(message)
        self.parameter = parameter


class RefinementLimitError(EiscritError, ArithmeticError):
    pass


class ContinuationError(EiscritError, ArithmeticError):
    pass
