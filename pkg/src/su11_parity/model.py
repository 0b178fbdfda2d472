r"""Closed-form parity signal and phase sensitivity of the SU(1,1) interferometer.

Inputs are a thermal state (mode a) and a squeezed vacuum (mode b). Both
OPAs share the gain ``g``, with pump phases 0 and pi, and each arm picks up
half the total phase ``phi``. Parity is detected on output mode b.

Signal and slope evaluation
---------------------------
In fully expanded form the denominator ``T`` of the parity signal
``8 / sqrt(T)`` is a sum of terms that grow like ``e^{8g}`` and cancel
down to 64 near ``phi = 0``. Evaluated that way in double precision the
excess ``T - 64``, which sets the signal width, is lost to round-off at
small phase. It factors exactly as

.. math::

    T = 64 + 256\,u\,[\cosh^2 r\,(1 + u) + n_{th}\cosh 2r\,(1 + u)
        + n_{th}(1 + n_{th})\,u],
    \qquad u = \sin^2(\phi/2)\sinh^2(2g),

and the slope numerator likewise collapses to a sum of positive terms.
:func:`parity_signal`, :func:`delta_parity` and :func:`signal_slope` use the
factored forms; :func:`signal_denominator_verbatim` and
:func:`signal_slope_verbatim` keep the expanded forms. Those accept
a math backend (``math`` or ``mpmath``) so they can be checked at high
precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from types import ModuleType

import numpy as np

from . import gaussian
from .errors import BlindSpotError, DomainError, NumericalDomainError, UndefinedLimitError


@dataclass(frozen=True)
class InterferometerConfig:
    """Physical knobs of one working point.

    Attributes:
        g: parametric strength of both OPAs.
        r: squeezing strength of the vacuum input on mode b.
        n_th: mean photon number of the thermal input on mode a.
        phi: total phase difference in radians.
    """

    g: float
    r: float = 0.0
    n_th: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        for name in ("g", "r", "n_th", "phi"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            if name != "phi" and value < 0:
                raise DomainError(f"{name} must be non-negative, got {value!r}")
            object.__setattr__(self, name, value)

    def replace(self, **changes) -> "InterferometerConfig":
        return InterferometerConfig(**{**asdict(self), **changes})


@dataclass(frozen=True)
class SensitivityReport:
    delta_phi: float
    parity: float
    delta_parity: float
    slope: float
    n_bar: float
    snl: float
    hl: float
    n_opa: float
    n_s: float

    def as_dict(self) -> dict:
        return asdict(self)


def n_opa(g: float) -> float:
    """Photons emitted by the first OPA from vacuum, ``2 sinh^2 g``."""
    return 2.0 * math.sinh(g) ** 2


def n_squeezed(r: float) -> float:
    return math.sinh(r) ** 2


def n_inside(cfg: InterferometerConfig) -> float:
    """Mean photon number between the OPAs: ``(n_opa + 1)(n_th + n_s) + n_opa``."""
    emitted = n_opa(cfg.g)
    return (emitted + 1.0) * (cfg.n_th + n_squeezed(cfg.r)) + emitted


def snl(cfg: InterferometerConfig) -> float:
    """Shot-noise limit ``1 / sqrt(n_bar)``."""
    n_bar = n_inside(cfg)
    if n_bar <= 0:
        raise UndefinedLimitError("no photons inside the interferometer; SNL is undefined")
    return 1.0 / math.sqrt(n_bar)


def hl(cfg: InterferometerConfig) -> float:
    """Heisenberg limit ``1 / n_bar``."""
    n_bar = n_inside(cfg)
    if n_bar <= 0:
        raise UndefinedLimitError("no photons inside the interferometer; HL is undefined")
    return 1.0 / n_bar


def gamma_entries(cfg: InterferometerConfig) -> dict[str, float]:
    """The nine independent output covariance entries, keyed ``"11"`` ... ``"44"``."""
    g, r, n, phi = cfg.g, cfg.r, cfg.n_th, cfg.phi
    sh, ch = math.sinh, math.cosh
    e2r, em2r = math.exp(2 * r), math.exp(-2 * r)
    half = math.sin(phi / 2) ** 2
    thermal = 1 + 2 * n
    common = 0.25 * (3 + ch(4 * g) - 2 * math.cos(phi) * sh(2 * g) ** 2) * thermal
    return {
        "11": em2r * half * sh(2 * g) ** 2 + common,
        "13": half * sh(4 * g) * (-ch(r) + sh(r)) * (ch(r) + math.exp(r) * n),
        "14": em2r * ch(g) * math.sin(phi) * sh(g) * (1 + e2r * thermal),
        "22": e2r * half * sh(2 * g) ** 2 + common,
        "23": ch(g) * math.sin(phi) * sh(g) * (1 + e2r + 2 * n),
        "24": 0.5 * half * sh(4 * g) * (1 + e2r + 2 * n),
        "33": 0.5 * e2r * (1 + math.cos(phi)) + em2r * ch(2 * g) ** 2 * half
        + half * sh(2 * g) ** 2 * thermal,
        "34": ch(2 * g) * math.sin(phi) * sh(2 * r),
        "44": 0.5 * em2r * (1 + math.cos(phi)) + e2r * ch(2 * g) ** 2 * half
        + half * sh(2 * g) ** 2 * thermal,
    }


def gamma_matrix(cfg: InterferometerConfig) -> np.ndarray:
    """Assemble :func:`gamma_entries` into the symmetric 4x4 output covariance.

    ``gamma_12`` has no closed form of its own; it vanishes for these
    inputs and is left at zero.
    """
    e = gamma_entries(cfg)
    out = np.zeros((4, 4))
    for key, value in e.items():
        i, j = int(key[0]) - 1, int(key[1]) - 1
        out[i, j] = out[j, i] = value
    return out


def input_state(cfg: InterferometerConfig) -> gaussian.GaussianState:
    return gaussian.tensor(gaussian.thermal_state(cfg.n_th), gaussian.squeezed_vacuum_state(cfg.r))


def output_state(cfg: InterferometerConfig) -> gaussian.GaussianState:
    """Two-mode output state by matrix propagation ``S Gamma_0 S^T``."""
    S = gaussian.full_interferometer_symplectic(cfg.g, cfg.phi)
    return gaussian.apply_symplectic(S, input_state(cfg))


def matrix_route_parity(cfg: InterferometerConfig) -> float:
    """Parity signal via propagation, reduction and ``1/sqrt(det)``."""
    return gaussian.parity_expectation(gaussian.reduce_to_mode_b(output_state(cfg)))


def _pair_excess(cfg: InterferometerConfig) -> tuple[float, float]:
    """Return ``(u, (T - 64) / 256)`` for the factored signal denominator."""
    r, n = cfg.r, cfg.n_th
    u = math.sin(cfg.phi / 2) ** 2 * math.sinh(2 * cfg.g) ** 2
    bracket = (math.cosh(r) ** 2 + n * math.cosh(2 * r)) * (1 + u) + n * (1 + n) * u
    return u, u * bracket


def signal_denominator(cfg: InterferometerConfig) -> float:
    """``T`` such that the parity signal is ``8 / sqrt(T)``."""
    _, excess = _pair_excess(cfg)
    return 64.0 + 256.0 * excess


def signal_denominator_verbatim(g, r, n_th, phi, lib: ModuleType = math):
    """Fully expanded ``T``.

    Suffers catastrophic cancellation in double precision for large ``g``;
    pass ``lib=mpmath`` (with raised ``mp.dps``) for reference values.
    """
    exp, sinh, cosh, sin, cos = lib.exp, lib.sinh, lib.cosh, lib.sin, lib.cos
    e2r, e4r = exp(2 * r), exp(4 * r)
    half = sin(phi / 2) ** 2
    head = exp(-2 * r) * (
        -7 + 50 * e2r - 7 * e4r
        + (1 + e2r) ** 2 * (
            4 * cosh(4 * g) + 3 * cosh(8 * g)
            + 8 * cos(2 * phi) * sinh(2 * g) ** 4
            - 8 * cos(phi) * sinh(4 * g) ** 2
        )
    )
    tail = 32 * exp(-2 * r) * half * sinh(2 * g) ** 2 * n_th * (
        (1 + e4r) * (3 + cosh(4 * g) - 2 * cos(phi) * sinh(2 * g) ** 2)
        + 8 * e2r * half * sinh(2 * g) ** 2 * (1 + n_th)
    )
    return head + tail


def signal_slope_verbatim(g, r, n_th, phi, lib: ModuleType = math):
    """Fully expanded ``|d<Pi_b>/d phi|`` (same precision caveat)."""
    sinh, cosh, sin = lib.sinh, lib.cosh, lib.sin
    n = n_th
    numerator = -(
        128 * sinh(2 * g) ** 2 * (
            -2 * sin(2 * phi) * sinh(2 * g) ** 2 * (cosh(r) ** 2 + n * (1 + cosh(2 * r) + n))
            + sin(phi) * (
                4 * cosh(2 * g) ** 2 * cosh(r) ** 2
                + 4 * n * (cosh(2 * g) ** 2 * cosh(2 * r) + sinh(2 * g) ** 2 * (1 + n))
            )
        )
    )
    return abs(numerator / signal_denominator_verbatim(g, r, n_th, phi, lib) ** 1.5)


def parity_signal(cfg: InterferometerConfig) -> float:
    """Expected parity ``<Pi_b> = 8 / sqrt(T)`` of output mode b."""
    T = signal_denominator(cfg)
    if not T > 0:
        raise NumericalDomainError(f"signal denominator {T!r} is not positive")
    return 8.0 / math.sqrt(T)


def delta_parity(cfg: InterferometerConfig) -> float:
    """Parity uncertainty ``sqrt(1 - <Pi_b>^2) = sqrt((T - 64) / T)``."""
    _, excess = _pair_excess(cfg)
    return math.sqrt(256.0 * excess / (64.0 + 256.0 * excess))


def signal_slope(cfg: InterferometerConfig) -> float:
    """``|d<Pi_b>/d phi|``."""
    g, r, n = cfg.g, cfg.r, cfg.n_th
    u, excess = _pair_excess(cfg)
    T = 64.0 + 256.0 * excess
    base = math.cosh(r) ** 2 + n * math.cosh(2 * r)
    pairs = base + 2 * u * (base + n * (1 + n))
    return 512.0 * math.sinh(2 * g) ** 2 * abs(math.sin(cfg.phi)) * pairs / T**1.5


def sensitivity_phi0(cfg: InterferometerConfig) -> float:
    """Phase sensitivity at ``phi = 0`` (the ``phi`` field is ignored).

    ``sqrt(2 / (n_opa (n_opa + 2) [1 + (1 + 2 n_s)(1 + 2 n_th)]))``

    Raises:
        BlindSpotError: for ``g = 0``, where the signal carries no phase information.
    """
    emitted = n_opa(cfg.g)
    if emitted <= 0:
        raise BlindSpotError("g = 0: the parity signal does not depend on phi")
    bracket = 1 + (1 + 2 * n_squeezed(cfg.r)) * (1 + 2 * cfg.n_th)
    return math.sqrt(2.0 / (emitted * (emitted + 2) * bracket))


def phase_sensitivity(cfg: InterferometerConfig) -> float:
    """Error-propagation sensitivity ``delta_parity / slope``.

    At exactly ``phi = 0`` both vanish; the analytic limit
    :func:`sensitivity_phi0` is returned instead. Elsewhere the common
    factor ``|sin(phi/2)|`` of numerator and denominator is cancelled
    algebraically, so tiny phases do not underflow. No series expansion is
    used.

    Raises:
        BlindSpotError: for ``g = 0`` or ``cos(phi/2) = 0``.
    """
    if cfg.phi == 0.0:
        return sensitivity_phi0(cfg)
    g, r, n = cfg.g, cfg.r, cfg.n_th
    gain = math.sinh(2 * g)
    half_cos = abs(math.cos(cfg.phi / 2))
    if gain == 0.0 or half_cos < 1e-15:
        raise BlindSpotError(f"signal slope vanishes at g={g}, phi={cfg.phi}")
    u, excess = _pair_excess(cfg)
    T = 64.0 + 256.0 * excess
    base = math.cosh(r) ** 2 + n * math.cosh(2 * r)
    pairs = base + 2 * u * (base + n * (1 + n))
    width = base * (1 + u) + n * (1 + n) * u
    return T * math.sqrt(width) / (64.0 * gain * half_cos * pairs)


def optimal_thermal_photons(g: float, n_s: float) -> float:
    """Thermal photon number ``(sinh^2 g - n_s) / cosh^2(2g)``, unclamped.

    Negative when ``n_s > sinh^2 g``; see :func:`optimal_thermal_photons_clamped`.
    """
    return (math.sinh(g) ** 2 - n_s) / math.cosh(2 * g) ** 2


def optimal_thermal_photons_clamped(g: float, n_s: float) -> float:
    return max(0.0, optimal_thermal_photons(g, n_s))


def build_report(cfg: InterferometerConfig) -> SensitivityReport:
    """Collect every scalar of one working point.

    Raises:
        BlindSpotError: when the sensitivity is undefined.
        UndefinedLimitError: when no photons are inside the interferometer.
    """
    delta_phi = phase_sensitivity(cfg)
    return SensitivityReport(
        delta_phi=delta_phi,
        parity=parity_signal(cfg),
        delta_parity=delta_parity(cfg),
        slope=signal_slope(cfg),
        n_bar=n_inside(cfg),
        snl=snl(cfg),
        hl=hl(cfg),
        n_opa=n_opa(cfg.g),
        n_s=n_squeezed(cfg.r),
    )
