"""Exception types raised by the calculator."""

from __future__ import annotations


class FloerSeqError(Exception):
    """Base class for all calculator errors."""


class SpecParseError(FloerSeqError):
    """A spec document could not be parsed; `path` is a JSON-pointer-like location."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class MaslovMismatch(FloerSeqError):
    def __init__(self, values: dict[str, int]):
        self.values = dict(values)
        shown = ", ".join(f"{k}={v}" for k, v in sorted(self.values.items()))
        super().__init__(f"Maslov index differs between components: {shown}")


class NonPositiveMaslov(FloerSeqError):
    def __init__(self, value: int):
        self.value = value
        super().__init__(f"Maslov index must be positive, got {value}")


class CrossCheckFailure(FloerSeqError):
    """Two independent formulas for the same quantity disagree."""


class InconsistentEuler(FloerSeqError):
    pass


class UnsupportedInput(FloerSeqError):
    pass


class CriticalLambda(FloerSeqError):
    def __init__(self, lam):
        self.lam = lam
        super().__init__(f"slope {lam} is a critical time; use a generic slope")


class Infeasible(FloerSeqError):
    def __init__(self, degree: int, period):
        self.degree = degree
        self.period = period
        super().__init__(f"no admissible matching saturates degree {degree} sources up to period {period}")


class MissingQuotientData(FloerSeqError):
    pass


class NegativeRank(FloerSeqError):
    def __init__(self, degree: int, value: int):
        self.degree = degree
        self.value = value
        super().__init__(f"solved rank {value} < 0 in degree {degree}")


class NotContracting(FloerSeqError):
    pass


class HypothesisNotMet(FloerSeqError):
    pass
