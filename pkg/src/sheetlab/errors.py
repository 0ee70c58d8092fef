"""Exception types shared across the package.

Every failure mode raised by the library is a subclass of SheetLabError so
callers can catch one base type at the CLI boundary.
"""

from __future__ import annotations


class SheetLabError(Exception):
    """Base class for all library errors."""


class CurveValidationError(SheetLabError):
    """Curve samples rejected: bad shape, non-finite data, or unresolved tail."""


class EmbeddingFailure(SheetLabError):
    """A constructed or evolved curve self-intersects (chord distance <= 0)."""


class NoPinch(SheetLabError):
    """Conjugate-pair search found no near approach below the gap threshold."""


class DegenerateMinimizer(SheetLabError):
    """Distance minimizer is not isolated; the pair refinement cannot certify it."""


class FrameInversionFailure(SheetLabError):
    """Newton inversion of a frame abscissa map failed inside the window."""


class FrameTooNarrow(SheetLabError):
    """Requested cutoff support does not fit inside the splash-frame window."""


class OnCurve(SheetLabError):
    """Target point lies on (or numerically on) the interface."""


class ResolutionError(SheetLabError):
    """Grid quadrature asked to resolve a gap finer than the node spacing."""


class IterationDivergence(SheetLabError):
    """Fixed-point iteration failed to converge; carries the residual history."""

    def __init__(self, message: str, residuals: list[float] | None = None):
        super().__init__(message)
        self.residuals = residuals or []


class CFLViolation(SheetLabError):
    """Requested time step exceeds the capillary stability limit."""


class EmbeddingLost(SheetLabError):
    """Evolution produced a self-intersecting curve; carries the halt time."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class LeftDomain(SheetLabError):
    """Traced particle crossed the interface."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class RegimeError(SheetLabError):
    """Input data never enters the regime a check requires."""


class HypothesisFailure(SheetLabError):
    """Measured data violates a structural hypothesis of an estimate check."""


class QuadratureFailure(SheetLabError):
    """Adaptive quadrature could not reach the requested tolerance."""


class FamilyConstructionFailure(SheetLabError):
    """A constructed test function violates its defining envelope."""


class ParseError(SheetLabError):
    """Config text could not be parsed."""


class ValidationError(SheetLabError):
    """Config parsed but one or more values are invalid; lists every violation."""

    def __init__(self, violations: list[str]):
        super().__init__("invalid config: " + "; ".join(violations))
        self.violations = list(violations)
