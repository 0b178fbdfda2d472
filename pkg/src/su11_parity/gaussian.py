r"""Two-mode Gaussian states and their symplectic evolution.

Quadratures follow :math:`\hat x = \hat a + \hat a^\dagger`,
:math:`\hat p = -i(\hat a - \hat a^\dagger)`, ordered
:math:`(x_a, p_a, x_b, p_b)`. In this normalisation the vacuum covariance
is the identity, :math:`[\hat X_k, \hat X_l] = 2i\Omega_{kl}` with the unit
symplectic form :math:`\Omega`, and a physical covariance satisfies
:math:`\Gamma + i\Omega \succeq 0`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalDomainError

#: Smallest eigenvalue a covariance matrix may have and still count as positive definite.
POSDEF_TOL = 1e-12
#: Allowed negative excursion of the eigenvalues of ``cov + i*omega``.
UNCERTAINTY_TOL = 1e-9


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _nonnegative(name: str, value: float) -> float:
    value = _finite(name, value)
    if value < 0:
        raise DomainError(f"{name} must be non-negative, got {value!r}")
    return value


def symplectic_form(n_modes: int = 2) -> np.ndarray:
    """Block-diagonal symplectic form, ``[[0, 1], [-1, 0]]`` per mode."""
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), block)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean quadrature vector and covariance matrix of one or two modes.

    Construction validates the state: finite entries, a symmetric positive
    definite covariance, and the uncertainty relation
    ``cov + i*omega >= 0``.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float)
        cov = np.array(self.cov, dtype=float)
        dim = mean.shape[0] if mean.ndim == 1 else -1
        if dim not in (2, 4) or cov.shape != (dim, dim):
            raise DomainError(
                f"expected a mean of length 2 or 4 and a matching covariance, "
                f"got shapes {mean.shape} and {cov.shape}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise DomainError("state contains non-finite entries")
        # symmetrise away round-off so the stored matrix is symmetric by construction
        cov = 0.5 * (cov + cov.T)
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.linalg.eigvalsh(cov)[0] <= POSDEF_TOL:
            raise NumericalDomainError("covariance matrix is not positive definite")
        uncertainty = np.linalg.eigvalsh(cov + 1j * symplectic_form(self.n_modes))
        if uncertainty[0] < -UNCERTAINTY_TOL * scale:
            raise DomainError(
                f"covariance violates the uncertainty relation (min eigenvalue {uncertainty[0]:.3e})"
            )

    @property
    def n_modes(self) -> int:
        return self.mean.shape[0] // 2


def vacuum_state() -> GaussianState:
    return GaussianState(np.zeros(2), np.eye(2))


def thermal_state(n_th: float) -> GaussianState:
    """Single-mode thermal state with mean photon number ``n_th``.

    Raises:
        DomainError: if ``n_th`` is negative or not finite.
    """
    n_th = _nonnegative("n_th", n_th)
    return GaussianState(np.zeros(2), (2.0 * n_th + 1.0) * np.eye(2))


def squeezed_vacuum_state(r: float) -> GaussianState:
    """Single-mode squeezed vacuum, covariance ``diag(e^{2r}, e^{-2r})``."""
    r = _nonnegative("r", r)
    return GaussianState(np.zeros(2), np.diag([math.exp(2 * r), math.exp(-2 * r)]))


def tensor(mode_a: GaussianState, mode_b: GaussianState) -> GaussianState:
    """Direct sum of two single-mode states; ``mode_a`` occupies slots (1, 2)."""
    if mode_a.n_modes != 1 or mode_b.n_modes != 1:
        raise DomainError("tensor expects two single-mode states")
    cov = np.zeros((4, 4))
    cov[:2, :2] = mode_a.cov
    cov[2:, 2:] = mode_b.cov
    return GaussianState(np.concatenate([mode_a.mean, mode_b.mean]), cov)


def two_mode_squeezer_symplectic(g: float, theta: float = 0.0) -> np.ndarray:
    r"""Phase-space matrix of an OPA with gain ``g`` and pump phase ``theta``.

    Realises :math:`\hat a \to \cosh g\,\hat a + e^{i\theta}\sinh g\,\hat b^\dagger`
    (and the same with a and b exchanged). At ``theta = 0`` the x-x cross
    entries are ``+sinh g`` and the p-p cross entries ``-sinh g``;
    ``theta = pi`` flips both signs.

    Args:
        g: parametric strength, non-negative.
        theta: pump phase in radians.

    Returns:
        4x4 real symplectic matrix.
    """
    g = _nonnegative("g", g)
    theta = _finite("theta", theta)
    c, s = math.cosh(g), math.sinh(g)
    # sin(pi) is ~1.2e-16, not 0; snap so theta = pi reproduces the exact OPA2 pattern
    ct, st = _snap(math.cos(theta)), _snap(math.sin(theta))
    cross = s * np.array([[ct, st], [st, -ct]])
    return np.block([[c * np.eye(2), cross], [cross, c * np.eye(2)]])


def _snap(x: float) -> float:
    return 0.0 if abs(x) < 1e-15 else x


def phase_shifter_symplectic(phi: float) -> np.ndarray:
    """Rotate both modes by ``phi / 2`` (total relative phase ``phi``)."""
    phi = _finite("phi", phi)
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    rot = np.array([[c, -s], [s, c]])
    return np.kron(np.eye(2), rot)


def full_interferometer_symplectic(g: float, phi: float) -> np.ndarray:
    """``S_OPA2 @ S_phi @ S_OPA1`` with pump phases 0 and pi."""
    return (
        two_mode_squeezer_symplectic(g, math.pi)
        @ phase_shifter_symplectic(phi)
        @ two_mode_squeezer_symplectic(g, 0.0)
    )


def is_symplectic(S: np.ndarray, atol: float = 1e-12) -> bool:
    S = np.asarray(S, dtype=float)
    omega = symplectic_form(S.shape[0] // 2)
    scale = max(1.0, float(np.max(np.abs(S))) ** 2)
    return bool(np.allclose(S @ omega @ S.T, omega, rtol=0.0, atol=atol * scale))


def apply_symplectic(S: np.ndarray, state: GaussianState) -> GaussianState:
    """Propagate a state: ``mean -> S mean``, ``cov -> S cov S^T``."""
    S = np.asarray(S, dtype=float)
    if S.shape != state.cov.shape:
        raise DomainError(f"symplectic of shape {S.shape} cannot act on a {state.n_modes}-mode state")
    return GaussianState(S @ state.mean, S @ state.cov @ S.T)


def reduce_to_mode_b(state: GaussianState) -> GaussianState:
    """Marginal of the second mode (lower-right 2x2 block)."""
    if state.n_modes != 2:
        raise DomainError("reduce_to_mode_b expects a two-mode state")
    return GaussianState(state.mean[2:], state.cov[2:, 2:])


def parity_expectation(state: GaussianState) -> float:
    """Parity expectation of a single-mode Gaussian state.

    Evaluates ``exp(-m^T cov^{-1} m / 2) / sqrt(det cov)``, i.e. pi times
    the Wigner function at the phase-space origin. The 1/2 in the exponent
    is what gives a coherent state ``|alpha>`` its parity ``exp(-2|alpha|^2)``.

    Raises:
        NumericalDomainError: if the covariance determinant is not positive.
    """
    if state.n_modes != 1:
        raise DomainError("parity_expectation expects a single-mode state")
    cov = state.cov
    det = cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0]
    if not det > 0:
        raise NumericalDomainError(f"covariance determinant {det!r} is not positive")
    m = state.mean
    exponent = 0.5 * float(m @ np.linalg.solve(cov, m)) if np.any(m) else 0.0
    return math.exp(-exponent) / math.sqrt(det)


def photon_number(state: GaussianState) -> float:
    """Total mean photon number, ``sum(tr(cov_k)/4 + |m_k|^2/4 - 1/2)`` over modes."""
    total = 0.0
    for k in range(state.n_modes):
        sl = slice(2 * k, 2 * k + 2)
        total += np.trace(state.cov[sl, sl]) / 4 + state.mean[sl] @ state.mean[sl] / 4 - 0.5
    return float(total)


def mean_photons_inside(state: GaussianState, g: float) -> float:
    """Photons between the two OPAs for input ``state`` and gain ``g``."""
    return photon_number(apply_symplectic(two_mode_squeezer_symplectic(g, 0.0), state))
