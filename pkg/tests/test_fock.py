import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln

from su11_parity import fock, gaussian, model
from su11_parity.errors import CutoffTooSmallError, DomainError, TractabilityError
from su11_parity.model import InterferometerConfig as Cfg


def coherent(alpha, cutoff):
    n = np.arange(cutoff + 1)
    log_mag = n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1) - 0.5 * abs(alpha) ** 2 if alpha else None
    if log_mag is None:
        return (n == 0).astype(complex)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def product_vector(amps_a, amps_b):
    return fock.FockVector(np.outer(amps_a, amps_b).astype(complex))


def gaussian_coherent(alpha):
    return gaussian.GaussianState(np.array([2 * alpha.real, 2 * alpha.imag]), np.eye(2))


class TestThermalInput:
    def test_vacuum(self):
        w, lost = fock.thermal_weights(0.0, 10)
        assert w[0] == 1.0 and w[1:].sum() == 0.0 and lost == 0.0

    @pytest.mark.parametrize("n_th", [0.1, 0.5, 1.0])
    def test_distribution(self, n_th):
        w, lost = fock.thermal_weights(n_th, 60)
        assert w.sum() + lost == pytest.approx(1.0, abs=1e-15)
        assert w @ np.arange(61) == pytest.approx(n_th, rel=1e-9)

    def test_truncation_budget(self):
        with pytest.raises(CutoffTooSmallError) as info:
            fock.thermal_weights(5.0, 10)
        assert info.value.stage == "thermal input"
        assert info.value.lost == pytest.approx((5 / 6) ** 11)

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            fock.thermal_weights(-1.0, 10)
        with pytest.raises(DomainError):
            fock.thermal_weights(0.5, 0)

    def test_thermal_parity(self):
        ens = fock.thermal_ensemble(0.5, 48)
        swapped = ens.amplitudes.swapaxes(-1, -2)
        assert float(ens.weights @ fock.parity_b(swapped)) == pytest.approx(1 / 2.0, abs=1e-12)


class TestSqueezedInput:
    @pytest.mark.parametrize("r", [0.0, 0.2, 0.6])
    def test_amplitudes(self, r):
        c = fock.squeezed_vacuum_amplitudes(r, 80)
        assert np.all(c[1::2] == 0)
        assert np.sum(c**2) == pytest.approx(1.0, abs=1e-12)
        assert np.arange(81) @ c**2 == pytest.approx(math.sinh(r) ** 2, abs=1e-12)

    def test_orientation_matches_gaussian_state(self):
        _, cov = fock.quadrature_moments(fock.squeezed_vacuum_vector(0.4, 60))
        np.testing.assert_allclose(cov[2:, 2:], gaussian.squeezed_vacuum_state(0.4).cov, atol=1e-10)

    def test_budget(self):
        with pytest.raises(CutoffTooSmallError) as info:
            fock.squeezed_vacuum_vector(2.0, 10)
        assert info.value.stage == "squeezed input"


class TestSqueezer:
    @pytest.mark.parametrize("g", [0.1, 0.3, 0.5])
    def test_two_mode_squeezed_vacuum(self, g):
        vac = product_vector(coherent(0, 48), coherent(0, 48))
        out, lost = fock.two_mode_squeeze_apply(vac, g, 0.0)
        n = np.arange(49)
        expected = np.zeros((49, 49), dtype=complex)
        expected[n, n] = np.tanh(g) ** n / np.cosh(g)
        assert np.max(np.abs(out.amplitudes - expected)) < 1e-10
        assert lost < 1e-14

    def test_unitary_inside_box(self):
        vec = product_vector(coherent(0.3 + 0.1j, 30), fock.squeezed_vacuum_amplitudes(0.2, 30))
        out, lost = fock.two_mode_squeeze_apply(vec, 0.4, 1.1)
        assert out.norm + lost == pytest.approx(vec.norm, abs=1e-13)

    def test_inverse(self):
        vec = product_vector(coherent(0.5, 40), coherent(0.2j, 40))
        there, _ = fock.two_mode_squeeze_apply(vec, 0.3, 0.0)
        back, _ = fock.two_mode_squeeze_apply(there, 0.3, math.pi)
        assert np.max(np.abs(back.amplitudes - vec.amplitudes)) < 1e-10

    def test_leakage_reported(self):
        vac = product_vector(coherent(0, 8), coherent(0, 8))
        # the default pad only resolves small overflows; widen it to see the whole tail
        out, lost = fock.two_mode_squeeze_apply(vac, 1.0, 0.0, pad=120)
        assert lost == pytest.approx(np.tanh(1.0) ** 18, rel=1e-9)
        assert out.norm + lost == pytest.approx(1.0, abs=1e-13)

    def test_stacked_vectors(self):
        a = product_vector(coherent(0.2, 20), coherent(0, 20)).amplitudes
        b = product_vector(coherent(0, 20), coherent(0.3j, 20)).amplitudes
        stacked, lost = fock.two_mode_squeeze_apply(np.stack([a, b]), 0.3, 0.5)
        single, _ = fock.two_mode_squeeze_apply(fock.FockVector(b), 0.3, 0.5)
        np.testing.assert_allclose(stacked[1], single.amplitudes, atol=1e-15)
        assert lost.shape == (2,)

    def test_rejects_negative_gain(self):
        with pytest.raises(DomainError):
            fock.two_mode_squeeze_apply(np.zeros((3, 3)), -0.1, 0.0)


@settings(max_examples=25, deadline=None)
@given(
    g=st.floats(0.0, 0.5),
    theta=st.floats(-math.pi, math.pi),
    phi=st.floats(-math.pi, math.pi),
    alpha=st.complex_numbers(max_magnitude=0.6),
    r=st.floats(0.0, 0.4),
)
def test_moments_match_symplectic_evolution(g, theta, phi, alpha, r):
    cutoff = 50
    vec = product_vector(coherent(alpha, cutoff), fock.squeezed_vacuum_amplitudes(r, cutoff))
    out, lost = fock.two_mode_squeeze_apply(vec, g, theta)
    out = fock.phase_apply(out, phi)
    assert lost < 1e-14
    mean, cov = fock.quadrature_moments(out)

    state = gaussian.tensor(gaussian_coherent(alpha), gaussian.squeezed_vacuum_state(r))
    S = gaussian.phase_shifter_symplectic(phi) @ gaussian.two_mode_squeezer_symplectic(g, theta)
    expected = gaussian.apply_symplectic(S, state)
    np.testing.assert_allclose(mean, expected.mean, atol=1e-9)
    np.testing.assert_allclose(cov, expected.cov, atol=1e-9)


class TestPhaseStage:
    def test_phases(self):
        amps = np.ones((3, 3), dtype=complex)
        out = fock.phase_apply(amps, 0.8)
        assert out[1, 2] == pytest.approx(np.exp(1.2j))
        assert out[0, 0] == 1.0

    def test_norm_preserved(self):
        vec = product_vector(coherent(0.7, 30), coherent(0.1, 30))
        assert fock.phase_apply(vec, 2.3).norm == pytest.approx(vec.norm, abs=1e-15)


def test_even_subspace_preserved():
    cfg = Cfg(0.4, 0.3, 0.0, 1.1)
    amps = fock.input_ensemble(cfg, 40).amplitudes
    n = np.arange(41)
    odd = (n[:, None] + n[None, :]) % 2 == 1
    for stage in range(3):
        if stage == 1:
            amps = fock.phase_apply(amps, cfg.phi)
        else:
            amps, _ = fock.two_mode_squeeze_apply(amps, cfg.g, math.pi * (stage == 2))
        assert np.max(np.abs(amps[..., odd])) == 0.0


class TestOracle:
    def test_example_point(self):
        cfg = Cfg(0.3, 0.0, 0.0, 0.4)
        assert fock.oracle_parity_signal(cfg).parity == pytest.approx(model.parity_signal(cfg), abs=1e-6)

    @pytest.mark.parametrize("cfg", [Cfg(0.5, 0.5, 0.5, 0.0), Cfg(0.2, 0.1, 0.3, 0.0)])
    def test_zero_phase(self, cfg):
        assert fock.oracle_parity_signal(cfg).parity == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("phi", [0.0, 0.9, 2.5])
    def test_no_gain(self, phi):
        assert fock.oracle_parity_signal(Cfg(0.0, 0.4, 0.5, phi)).parity == pytest.approx(1.0, abs=1e-12)

    def test_error_budget(self):
        res = fock.oracle_parity_signal(Cfg(0.3, 0.2, 0.25, 0.7))
        assert set(res.leakage) == {"squeezed input", "first OPA", "second OPA"}
        assert 0 <= res.total_loss < 1e-9

    def test_tractability_guard(self):
        with pytest.raises(TractabilityError):
            fock.oracle_parity_signal(Cfg(5.0))

    def test_cutoff_error_names_stage(self):
        with pytest.raises(CutoffTooSmallError) as info:
            fock.oracle_parity_signal(Cfg(0.3, 0.0, 0.0, 2.0), cutoff=12)
        assert info.value.stage in {"first OPA", "second OPA"}
        assert info.value.lost > info.value.budget


@pytest.mark.parametrize(
    "g,r,n_th,phi",
    list(itertools.product((0.1, 0.3), (0.0, 0.25), (0.0, 0.25), (0.3, 1.2))),
)
def test_oracle_matches_gaussian(g, r, n_th, phi):
    cfg = Cfg(g, r, n_th, phi)
    assert fock.oracle_parity_signal(cfg, 32).parity == pytest.approx(model.parity_signal(cfg), abs=1e-9)
