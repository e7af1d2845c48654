"""Exception types shared across the package."""

from __future__ import annotations


class ExpressionError(ValueError):
    """Base class for errors raised while building or evaluating expressions."""


class ExprSyntaxError(ExpressionError):
    """Input text does not conform to the expression grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbolError(ExpressionError):
    """An identifier is neither the independent variable nor a declared parameter."""

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown symbol {name!r} (at position {position})")
        self.name = name
        self.position = position


class UnsupportedFormError(ExpressionError):
    """Expression falls outside the (rational) x exp(polynomial) normal form."""


class ExprDivisionByZero(ExpressionError):
    """Division by an expression that normalizes to zero."""


class PoleError(ExpressionError):
    """Numeric evaluation hit a vanishing denominator."""


class UnboundParameterError(ExpressionError):
    """Numeric evaluation requires a parameter with no binding."""


class DegreeExplosionError(RuntimeError):
    """Iteration aborted because a numerator degree exceeded the configured bound."""


class NoTerminationError(RuntimeError):
    """No terminating index was found within n_max; trace is attached."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class DegeneratePencilError(RuntimeError):
    """A back-substitution denominator is identically zero at termination."""


class TransformInapplicableError(ValueError):
    """The chosen linearizing transform requires a nonzero coefficient function."""


class AllTransformsFailedError(RuntimeError):
    """Every solver strategy failed; per-transform diagnostics are attached."""

    def __init__(self, message: str, failures: dict):
        super().__init__(message)
        self.failures = failures


class NoTruncatingParameterError(ValueError):
    """Series expansion requires a nonpositive-integer numerator parameter."""


class SeriesConvergenceError(RuntimeError):
    """Series evaluation did not converge within the term budget."""


class PoleOnGridError(ValueError):
    """A verification grid point is too close to a pole."""


class IntegrationEscapedError(RuntimeError):
    """Numeric integration blew up, most likely across a movable pole."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge."""
