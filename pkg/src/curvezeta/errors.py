"""Exception hierarchy.

Every error raised on purpose by the package derives from ``CurveZetaError`` so
that callers (the CLI in particular) can separate arithmetic failures from
programming errors.
"""


class CurveZetaError(Exception):
    """Base class for all package errors."""


# finite fields
class NonPrime(CurveZetaError, ValueError):
    pass


class FieldMismatch(CurveZetaError, TypeError):
    pass


class DivisionByZero(CurveZetaError, ZeroDivisionError):
    pass


# curves
class SingularCurve(CurveZetaError, ValueError):
    pass


class UnsupportedModel(CurveZetaError, ValueError):
    pass


class EnumerationTooLarge(CurveZetaError, ValueError):
    pass


class InconsistentCounts(CurveZetaError, ValueError):
    pass


# zeta functions
class NonIntegralCoefficient(CurveZetaError, ValueError):
    pass


class FunctionalEquationError(CurveZetaError, ValueError):
    """Counts or coefficients are incompatible with ``c[2g-i] == q**(g-i) * c[i]``."""


class FactorizationObstruction(CurveZetaError, ValueError):
    pass


class NonPositive(CurveZetaError, ValueError):
    pass


class EulerMismatch(CurveZetaError, ValueError):
    pass


class NonConvergence(CurveZetaError, ArithmeticError):
    pass


class UnsupportedGenus(CurveZetaError, ValueError):
    pass


class InvalidProfile(CurveZetaError, ValueError):
    pass


class SpecializationMismatch(CurveZetaError, ValueError):
    pass


# explicit formula
class InsufficientTable(CurveZetaError, ValueError):
    pass


class JumpPoint(CurveZetaError, ValueError):
    pass


# characters
class DerivativeVanishes(CurveZetaError, ValueError):
    pass


class QuotientTooLarge(CurveZetaError, ValueError):
    pass


# Stepanov-Bombieri
class PreconditionFailed(CurveZetaError, ValueError):
    pass


class EmptyKernel(CurveZetaError, ArithmeticError):
    pass


class ZeroElement(CurveZetaError, ValueError):
    pass


class ZeroCheckFailed(CurveZetaError, AssertionError):
    pass


# Nevanlinna
class ZeroOnBoundary(CurveZetaError, ValueError):
    pass


class SingularityOnContour(CurveZetaError, ValueError):
    pass


# catalog / CLI
class CatalogError(CurveZetaError, ValueError):
    pass
