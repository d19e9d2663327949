"""Exception hierarchy shared by all modules."""


class ThetaSpannerError(ValueError):
    """Base class for every error raised by this package."""


class BoundaryDegeneracy(ThetaSpannerError):
    """A direction lies (numerically) on a cone boundary ray."""


class NotInCone(ThetaSpannerError):
    pass


class GeneralPositionViolation(ThetaSpannerError):
    def __init__(self, violations):
        self.violations = list(violations)
        head = ", ".join(str(v) for v in self.violations[:3])
        more = "" if len(self.violations) <= 3 else f" (+{len(self.violations) - 3} more)"
        super().__init__(f"point set not in general position: {head}{more}")


class InvalidInstance(ThetaSpannerError):
    pass


class IndexOutOfRange(InvalidInstance):
    pass


class ParseError(ThetaSpannerError):
    pass


class PreconditionViolated(ThetaSpannerError):
    pass


class UnsupportedConeCount(ThetaSpannerError):
    pass


class AlphaOutOfRange(ThetaSpannerError):
    pass


class DegenerateDenominator(ThetaSpannerError):
    pass
