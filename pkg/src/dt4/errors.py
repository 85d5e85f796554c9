"""Exception types raised across the engine."""


class DT4Error(Exception):
    """Base class for all engine errors."""


class LatticeViolation(DT4Error):
    pass


class TrivialWeightInDenominator(DT4Error):
    pass


class EvaluationSingular(DT4Error):
    pass


class NonExpandable(DT4Error):
    pass


class NonzeroConstantTerm(DT4Error):
    pass


class OrderMismatch(DT4Error):
    pass


class RankMismatch(DT4Error):
    pass


class ZeroLinearForm(DT4Error):
    pass


class PoleAtReduction(DT4Error):
    pass


class UnsupportedGroup(DT4Error):
    pass


class ChartNotCalabiYau(DT4Error):
    pass


class NotSU4(DT4Error):
    pass


class IdentityFailed(DT4Error):
    def __init__(self, message, exponent=None):
        super().__init__(message)
        self.exponent = exponent


class NoSignVectorWorks(DT4Error):
    pass


class ContributionError(DT4Error):
    """Wraps a per-partition failure with the offending partition attached."""

    def __init__(self, partition, cause):
        super().__init__(f"{type(cause).__name__} at partition {partition}: {cause}")
        self.partition = partition
        self.cause = cause
