"""Phase estimation with an SU(1,1) interferometer fed by thermal and squeezed-vacuum light.

Covariance-matrix propagation (:mod:`.gaussian`), closed-form signal and
sensitivity (:mod:`.model`), a truncated Fock-space oracle (:mod:`.fock`)
and sweep/figure tooling (:mod:`.sweeps`, :mod:`.cli`).
"""

from .errors import (
    BlindSpotError,
    CutoffTooSmallError,
    DomainError,
    NumericalDomainError,
    Su11Error,
    TractabilityError,
    UndefinedLimitError,
)
from .model import InterferometerConfig, SensitivityReport, build_report

__version__ = "0.1.0"

__all__ = [
    "BlindSpotError",
    "CutoffTooSmallError",
    "DomainError",
    "InterferometerConfig",
    "NumericalDomainError",
    "SensitivityReport",
    "Su11Error",
    "TractabilityError",
    "UndefinedLimitError",
    "build_report",
]
