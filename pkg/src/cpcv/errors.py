"""Exception types raised across the package.

Everything derives from :class:`CpcvError`, itself a ``ValueError``, so
callers can catch broadly or per condition.
"""


class CpcvError(ValueError):
    """Base class for argument and state errors raised by cpcv."""


class BadChangePoints(CpcvError):
    """Change-point locations are not strictly increasing inside (0, n)."""


class AdjacentLevelsEqual(CpcvError):
    """Two consecutive segment levels coincide, so the change is spurious."""


class IndexOutOfRange(CpcvError):
    """A design-grid index lies outside 1..n."""


class LMaxTooLarge(CpcvError):
    """More change points requested than the series can hold."""


class TooLargeForOracle(CpcvError):
    """Input exceeds the size guard of an exhaustive reference routine."""


class BadFoldCount(CpcvError):
    """Fold count outside the valid range 2..n/2."""


class InconsistentScales(CpcvError):
    """Reduced-scale change points do not match the complement they refer to."""


class OddLength(CpcvError):
    """Two-fold criteria need an even number of observations."""


class LInfeasible(CpcvError):
    """Candidate change-point count cannot be fitted on a half series."""


class BadGrid(CpcvError):
    """Empty or unusable grid of tuning values."""


class AllInfeasible(CpcvError):
    """Every candidate on the criterion curve evaluated to +inf."""


class SeriesTooShort(CpcvError):
    """Series too short for the requested search range."""


class LengthMismatch(CpcvError):
    """Two signals that must share a grid have different lengths."""


class BadParams(CpcvError):
    """Scenario or model parameters violate their constraints."""
