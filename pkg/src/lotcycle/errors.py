"""Exception hierarchy.

Everything raised on purpose derives from ``LotSizingError`` so the CLI can
map domain failures to exit code 1 and leave parse failures (``FormatError``)
to exit code 2.
"""


class LotSizingError(Exception):
    pass


class InfeasibleInstance(LotSizingError):
    pass


class MismatchedVariant(LotSizingError):
    pass


class IndexOutOfRange(LotSizingError):
    pass


class InvalidSchedule(LotSizingError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"schedule is not valid: {lines}")


class DegenerateSwitchingCosts(LotSizingError):
    pass


class UnsupportedCase(LotSizingError):
    pass


class InvalidPeriodIndex(LotSizingError):
    pass


class UnsupportedShape(LotSizingError):
    pass


class NoIdleTime(LotSizingError):
    pass


class SearchSpaceTooLarge(LotSizingError):
    pass


class TooManyNodes(LotSizingError):
    pass


class NotMetric(LotSizingError):
    pass


class InvalidTour(LotSizingError):
    pass


class FormatError(ValueError):
    """Raised when an input document cannot be parsed."""
