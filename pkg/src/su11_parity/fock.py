"""Truncated Fock-space oracle for the parity signal.

Evolves explicit two-mode state vectors through OPA, phase shift and OPA
and measures parity on mode b. Nothing here touches the covariance
machinery, so agreement with :mod:`su11_parity.model` is an independent
check of every sign and normalisation convention.

Two-mode squeezing conserves ``n_a - n_b``. Its generator therefore splits
into tridiagonal blocks, one per photon-number difference, and each block
is exponentiated separately. Stages run on a padded box so that
probability pushed past the cutoff is measured rather than reflected back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import CutoffTooSmallError, DomainError, TractabilityError
from .model import InterferometerConfig, n_inside

DEFAULT_CUTOFF = 48
DEFAULT_EPS_TRUNC = 1e-9
#: Refuse configurations whose inside photon number exceeds ``cutoff / TRACTABILITY_RATIO``.
TRACTABILITY_RATIO = 8.0


@dataclass(frozen=True, eq=False)
class FockVector:
    """Two-mode amplitudes ``amplitudes[n_a, n_b]`` for ``0 <= n <= cutoff``."""

    amplitudes: np.ndarray

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[-1] - 1

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True, eq=False)
class FockEnsemble:
    """Mixture of pure two-mode states.

    ``amplitudes`` stacks the members along the first axis so that stages
    act on the whole ensemble at once. ``truncated`` and ``leakage``
    record probability lost at preparation and per evolution stage.
    """

    weights: np.ndarray
    amplitudes: np.ndarray
    truncated: float = 0.0
    leakage: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.weights) < 1 or len(self.weights) != len(self.amplitudes):
            raise DomainError("ensemble needs at least one member and one weight per member")
        if np.any(self.weights < 0):
            raise DomainError("ensemble weights must be non-negative")

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[-1] - 1

    @property
    def members(self) -> list[FockVector]:
        return [FockVector(a) for a in self.amplitudes]


def _check_cutoff(cutoff: int, minimum: int = 1) -> int:
    if int(cutoff) != cutoff or cutoff < minimum:
        raise DomainError(f"cutoff must be an integer >= {minimum}, got {cutoff!r}")
    return int(cutoff)


def thermal_weights(n_th: float, cutoff: int, eps_trunc: float = DEFAULT_EPS_TRUNC):
    """Geometric photon-number distribution ``n^k / (1 + n)^(k+1)``, ``k <= cutoff``.

    Returns:
        (weights, truncated_mass)

    Raises:
        CutoffTooSmallError: if the mass beyond the cutoff exceeds ``eps_trunc``.
    """
    cutoff = _check_cutoff(cutoff)
    if not (math.isfinite(n_th) and n_th >= 0):
        raise DomainError(f"n_th must be finite and non-negative, got {n_th!r}")
    if n_th == 0:
        weights = np.zeros(cutoff + 1)
        weights[0] = 1.0
        return weights, 0.0
    ratio = n_th / (1.0 + n_th)
    k = np.arange(cutoff + 1)
    weights = ratio**k / (1.0 + n_th)
    truncated = ratio ** (cutoff + 1)
    if truncated > eps_trunc:
        raise CutoffTooSmallError("thermal input", truncated, eps_trunc)
    return weights, truncated


def squeezed_vacuum_amplitudes(r: float, cutoff: int) -> np.ndarray:
    """Single-mode squeezed vacuum amplitudes on ``|0> ... |cutoff>``.

    ``c_{2m} = (tanh r)^m sqrt((2m)!) / (2^m m! sqrt(cosh r))``, odd levels zero.
    The positive sign stretches ``x`` and squeezes ``p``, matching the
    covariance ``diag(e^{2r}, e^{-2r})`` of the Gaussian route.
    """
    if not (math.isfinite(r) and r >= 0):
        raise DomainError(f"r must be finite and non-negative, got {r!r}")
    amps = np.zeros(cutoff + 1)
    m = np.arange(cutoff // 2 + 1)
    log_mag = 0.5 * gammaln(2 * m + 1) - m * math.log(2) - gammaln(m + 1) - 0.5 * math.log(math.cosh(r))
    t = math.tanh(r)
    powers = t ** m if t > 0 else (m == 0).astype(float)
    amps[::2] = powers * np.exp(log_mag)
    return amps


def thermal_ensemble(n_th: float, cutoff: int = DEFAULT_CUTOFF,
                     eps_trunc: float = DEFAULT_EPS_TRUNC) -> FockEnsemble:
    """Thermal mode a with mode b in vacuum; members are ``|k> x |0>``."""
    weights, truncated = thermal_weights(n_th, cutoff, eps_trunc)
    keep = np.flatnonzero(weights)
    amps = np.zeros((len(keep), cutoff + 1, cutoff + 1), dtype=complex)
    amps[np.arange(len(keep)), keep, 0] = 1.0
    return FockEnsemble(weights[keep], amps, truncated)


def squeezed_vacuum_vector(r: float, cutoff: int = DEFAULT_CUTOFF,
                           eps_trunc: float = DEFAULT_EPS_TRUNC) -> FockVector:
    """Vacuum in mode a, squeezed vacuum in mode b.

    Raises:
        CutoffTooSmallError: if more than ``eps_trunc`` of the norm lies above the cutoff.
    """
    cutoff = _check_cutoff(cutoff, 2)
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amps[0, :] = squeezed_vacuum_amplitudes(r, cutoff)
    vec = FockVector(amps)
    lost = 1.0 - vec.norm
    if lost > eps_trunc:
        raise CutoffTooSmallError("squeezed input", lost, eps_trunc)
    return vec


def input_ensemble(cfg: InterferometerConfig, cutoff: int = DEFAULT_CUTOFF,
                   eps_trunc: float = DEFAULT_EPS_TRUNC) -> FockEnsemble:
    """Thermal mode a tensored with squeezed-vacuum mode b."""
    thermal = thermal_ensemble(cfg.n_th, cutoff, eps_trunc)
    squeezed = squeezed_vacuum_vector(cfg.r, cutoff, eps_trunc).amplitudes[0]
    thermal_a = thermal.amplitudes[:, :, 0]
    amps = thermal_a[:, :, None] * squeezed[None, None, :]
    return FockEnsemble(
        thermal.weights,
        amps,
        truncated=thermal.truncated,
        leakage={"squeezed input": max(0.0, 1.0 - float(np.sum(np.abs(squeezed) ** 2)))},
    )


@lru_cache(maxsize=None)
def _sector_indices(box: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Flat-index chains ``(n_a, n_b) = (k + max(d, 0), k + max(-d, 0))`` for each difference d."""
    chains = []
    for d in range(-box, box + 1):
        k = np.arange(box + 1 - abs(d))
        chains.append((k + max(d, 0), k + max(-d, 0)))
    return tuple(chains)


@lru_cache(maxsize=64)
def _squeezer_blocks(g: float, theta: float, box: int) -> tuple[np.ndarray, ...]:
    r"""``exp(xi a^dag b^dag - xi^* a b)`` restricted to each difference sector, ``xi = g e^{i theta}``."""
    xi = g * complex(math.cos(theta), math.sin(theta))
    blocks = []
    for na, nb in _sector_indices(box):
        size = len(na)
        gen = np.zeros((size, size), dtype=complex)
        if size > 1:
            coupling = np.sqrt((na[:-1] + 1.0) * (nb[:-1] + 1.0))
            idx = np.arange(size - 1)
            gen[idx + 1, idx] = xi * coupling
            gen[idx, idx + 1] = -np.conj(xi) * coupling
        blocks.append(expm(gen))
    return tuple(blocks)


def _embed(amps: np.ndarray, box: int) -> np.ndarray:
    out = np.zeros(amps.shape[:-2] + (box + 1, box + 1), dtype=complex)
    n = amps.shape[-1]
    out[..., :n, :n] = amps
    return out


def two_mode_squeeze_apply(state, g: float, theta: float, cutoff: int | None = None,
                           pad: int | None = None):
    """Apply a two-mode squeezer to one vector or a stack of vectors.

    The evolution runs on a box enlarged by ``pad`` levels per mode, and the
    result is cut back to ``cutoff``.

    Args:
        state: :class:`FockVector` or array of shape ``(..., N+1, N+1)``.
        g: squeezing strength.
        theta: pump phase.
        cutoff: output cutoff, defaults to the input's.
        pad: extra working levels, default ``cutoff // 2``.

    Returns:
        ``(evolved, lost)``. ``evolved`` has the input's type. ``lost`` is
        the probability moved past ``cutoff``, one value per stacked vector.
    """
    amps = state.amplitudes if isinstance(state, FockVector) else np.asarray(state)
    if not (math.isfinite(g) and g >= 0 and math.isfinite(theta)):
        raise DomainError(f"invalid squeezer parameters g={g!r}, theta={theta!r}")
    cutoff = amps.shape[-1] - 1 if cutoff is None else _check_cutoff(cutoff)
    pad = cutoff // 2 if pad is None else int(pad)
    box = max(cutoff, amps.shape[-1] - 1) + pad
    work = _embed(amps, box)
    out = np.empty_like(work)
    for (na, nb), block in zip(_sector_indices(box), _squeezer_blocks(float(g), float(theta), box)):
        out[..., na, nb] = work[..., na, nb] @ block.T
    before = np.sum(np.abs(amps) ** 2, axis=(-2, -1))
    kept = out[..., : cutoff + 1, : cutoff + 1]
    lost = np.maximum(before - np.sum(np.abs(kept) ** 2, axis=(-2, -1)), 0.0)
    if isinstance(state, FockVector):
        return FockVector(kept.copy()), float(lost)
    return kept.copy(), lost


def phase_apply(state, phi: float):
    """Multiply ``|n_a, n_b>`` by ``exp(i (phi/2) (n_a + n_b))``."""
    amps = state.amplitudes if isinstance(state, FockVector) else np.asarray(state)
    n = np.arange(amps.shape[-1])
    phases = np.exp(0.5j * phi * (n[:, None] + n[None, :]))
    out = amps * phases
    return FockVector(out) if isinstance(state, FockVector) else out


def parity_b(amplitudes: np.ndarray) -> np.ndarray:
    """``sum (-1)^{n_b} |c|^2`` per stacked vector."""
    sign = (-1.0) ** np.arange(amplitudes.shape[-1])
    return np.sum(np.abs(amplitudes) ** 2 * sign, axis=(-2, -1))


def parity_b_fock(ensemble: FockEnsemble) -> float:
    """Weighted parity of mode b over the ensemble."""
    return float(ensemble.weights @ parity_b(ensemble.amplitudes))


def quadrature_moments(state) -> tuple[np.ndarray, np.ndarray]:
    """Mean and symmetrised covariance of ``(x_a, p_a, x_b, p_b)`` of a pure state.

    Only meaningful when the amplitude near the cutoff is negligible.
    """
    c = state.amplitudes if isinstance(state, FockVector) else np.asarray(state)
    n = c.shape[-1]
    root = np.sqrt(np.arange(1, n))

    def lower(v, axis):
        out = np.zeros_like(v)
        if axis == 0:
            out[:-1, :] = root[:, None] * v[1:, :]
        else:
            out[:, :-1] = root[None, :] * v[:, 1:]
        return out

    def raise_(v, axis):
        out = np.zeros_like(v)
        if axis == 0:
            out[1:, :] = root[:, None] * v[:-1, :]
        else:
            out[:, 1:] = root[None, :] * v[:, :-1]
        return out

    ops = []
    for axis in (0, 1):
        ops.append(lambda v, a=axis: lower(v, a) + raise_(v, a))
        ops.append(lambda v, a=axis: -1j * (lower(v, a) - raise_(v, a)))

    applied = [op(c) for op in ops]
    mean = np.array([np.vdot(c, x).real for x in applied])
    second = np.empty((4, 4))
    for k in range(4):
        for l in range(4):
            second[k, l] = np.vdot(applied[k], applied[l]).real
    cov = 0.5 * (second + second.T) - np.outer(mean, mean)
    return mean, cov


@dataclass(frozen=True)
class OracleResult:
    """Parity from the Fock oracle with its error budget."""

    parity: float
    truncated: float
    leakage: dict[str, float]

    @property
    def total_loss(self) -> float:
        return self.truncated + sum(self.leakage.values())


def check_tractable(cfg: InterferometerConfig, cutoff: int) -> None:
    """Refuse configurations whose photon numbers are out of reach of ``cutoff``."""
    n_bar = n_inside(cfg)
    if n_bar > cutoff / TRACTABILITY_RATIO:
        raise TractabilityError(
            f"{n_bar:.3g} photons inside the interferometer is too many for cutoff {cutoff}; "
            f"the oracle handles at most cutoff/{TRACTABILITY_RATIO:g}"
        )


def oracle_parity_signal(cfg: InterferometerConfig, cutoff: int = DEFAULT_CUTOFF,
                         eps_trunc: float = DEFAULT_EPS_TRUNC) -> OracleResult:
    """Parity of output mode b by explicit state-vector evolution.

    Raises:
        TractabilityError: when ``cfg`` is too large for ``cutoff``.
        CutoffTooSmallError: naming the first stage whose loss exceeds ``eps_trunc``.
    """
    cutoff = _check_cutoff(cutoff, 2)
    check_tractable(cfg, cutoff)
    ens = input_ensemble(cfg, cutoff, eps_trunc)
    leakage = dict(ens.leakage)
    if leakage["squeezed input"] > eps_trunc:
        raise CutoffTooSmallError("squeezed input", leakage["squeezed input"], eps_trunc)

    amps = ens.amplitudes
    for stage, theta, phase in (("first OPA", 0.0, cfg.phi), ("second OPA", math.pi, None)):
        amps, lost = two_mode_squeeze_apply(amps, cfg.g, theta, cutoff)
        leakage[stage] = float(ens.weights @ lost)
        if leakage[stage] > eps_trunc:
            raise CutoffTooSmallError(stage, leakage[stage], eps_trunc)
        if phase is not None:
            amps = phase_apply(amps, phase)

    evolved = FockEnsemble(ens.weights, amps, ens.truncated, leakage)
    return OracleResult(parity_b_fock(evolved), ens.truncated, leakage)
