"""Exception hierarchy.

The CLI maps these onto exit codes, so keep domain/numerical failures
separate from I/O and usage problems.
"""


class Su11Error(Exception):
    """Base class for every error raised by this package."""


class DomainError(Su11Error, ValueError):
    """A parameter lies outside the domain of an operation."""


class NumericalDomainError(Su11Error, ArithmeticError):
    """A quantity that must be positive (determinant, denominator) is not."""


class BlindSpotError(Su11Error, ArithmeticError):
    """The phase sensitivity is undefined because the signal slope vanishes."""


class UndefinedLimitError(Su11Error, ArithmeticError):
    """SNL/HL requested with zero photons inside the interferometer."""


class TractabilityError(DomainError):
    """Configuration too large for the truncated Fock-space oracle."""


class CutoffTooSmallError(Su11Error, ArithmeticError):
    """Probability mass beyond the Fock cutoff exceeds the truncation budget.

    Attributes:
        stage: name of the pipeline stage that overflowed.
        lost: probability mass that fell outside the cutoff.
        budget: the allowed truncation budget.
    """

    def __init__(self, stage: str, lost: float, budget: float):
        self.stage = stage
        self.lost = lost
        self.budget = budget
        super().__init__(
            f"{stage}: truncated probability {lost:.3e} exceeds budget {budget:.3e}; "
            "increase the cutoff"
        )
