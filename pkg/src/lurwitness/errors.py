"""Exception hierarchy for lurwitness."""


class LURError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(LURError, ValueError):
    pass


class DimMismatch(LURError, ValueError):
    pass


class InvalidState(LURError, ValueError):
    """A matrix or vector failed density-matrix / pure-state validation."""


class InvalidSpin(LURError, ValueError):
    pass


class NonConvergence(LURError, RuntimeError):
    pass


class ConsistencyError(LURError, ArithmeticError):
    """A quantity that must be nonnegative came out clearly negative."""


class SchemaError(LURError, ValueError):
    pass


class NormalizationError(LURError, ValueError):
    pass


class SpectrumMismatch(LURError, ValueError):
    pass


class MissingSetting(LURError, KeyError):
    pass
