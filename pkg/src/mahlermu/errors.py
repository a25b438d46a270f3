"""Exception hierarchy shared across the package."""


class MahlerError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateSystem(MahlerError):
    """The functional equation is degenerate (zero numerator or denominator)."""


class NoLaurentSolution(MahlerError):
    """No Laurent-series solution in z^{-1} exists under the chosen normalization."""


class HypothesisViolated(MahlerError):
    """A(b^{d^m}) * B(b^{d^m}) vanishes for some m, so evaluation at b breaks down."""


class InsufficientPrecision(MahlerError):
    """The truncated series does not carry enough coefficients to certify the result."""


class DegreeCapExceeded(MahlerError):
    """An intermediate polynomial would exceed the configured degree cap."""


class SearchCapExceeded(MahlerError):
    """A bounded number-theoretic search exceeded its iteration cap."""
