import numpy as np
import pytest

from uscpol.errors import DomainError, GapError
from uscpol.hopfield import (
    emitter_polariton_rabi, mixing_angle, mixing_sin_cos,
    mixing_sin_cos_from_frequencies, polariton_frequencies,
    resonant_wavevector, three_mode_spectrum,
)
from uscpol.params import SystemParams

# golden-ratio reference point: Omega_d = 1, omega_k = 1
GOLD = SystemParams(Omega_d=1.0, omega_e=1.0, Omega_e=0.1)
W_LP = np.sqrt((3.0 - np.sqrt(5.0)) / 2.0)   # 0.61803...
W_UP = np.sqrt((3.0 + np.sqrt(5.0)) / 2.0)   # 1.61803...
COS2 = 0.5 * (1.0 + 1.0 / np.sqrt(5.0))      # 0.72360...
SIN2 = 0.5 * (1.0 - 1.0 / np.sqrt(5.0))


def params(Omega_d, omega_e=0.5, Omega_e=0.1):
    return SystemParams(Omega_d=Omega_d, omega_e=omega_e, Omega_e=Omega_e)


def log_grid(n=4000, seed=7):
    rng = np.random.default_rng(seed)
    return 10.0 ** rng.uniform(-3, 3, n)


class TestPolaritonFrequencies:
    def test_decoupled(self):
        assert polariton_frequencies(params(0.0), 0.5) == pytest.approx((0.5, 1.0))

    def test_zero_k(self):
        lp, up = polariton_frequencies(params(0.7), 0.0)
        assert lp == 0.0
        assert up == pytest.approx(np.sqrt(1.0 + 0.49), rel=1e-15)

    def test_golden_point(self):
        lp, up = polariton_frequencies(GOLD, 1.0)
        assert lp == pytest.approx(W_LP, rel=1e-14)
        assert up == pytest.approx(W_UP, rel=1e-14)
        assert lp * up == pytest.approx(1.0, rel=1e-14)

    def test_negative_k_rejected(self):
        with pytest.raises(DomainError):
            polariton_frequencies(GOLD, -1.0)

    def test_branch_ordering_bounds(self):
        k = log_grid()
        for Od in (0.0, 0.3, 1.0, 2.0):
            p = params(Od)
            lp, up = polariton_frequencies(p, k)
            assert np.all(lp <= np.minimum(k, p.omega_d) * (1 + 1e-12))
            assert np.all(up >= np.maximum(k, p.omega_d_dressed) * (1 - 1e-12))


class TestAlgebraicInvariants:
    def test_product_and_trace(self):
        k = log_grid()
        rng = np.random.default_rng(11)
        Od = rng.uniform(0, 2, k.size)
        OX = 1.0 + Od**2
        lp = np.empty_like(k)
        up = np.empty_like(k)
        for i in range(k.size):
            lp[i], up[i] = polariton_frequencies(params(Od[i]), k[i])
        prod = np.abs(lp * up - k) / k
        trace = np.abs(lp**2 + up**2 - (k**2 + OX)) / (k**2 + OX)
        assert prod.max() < 1e-12
        assert trace.max() < 1e-12

    def test_pythagoras_and_sum_rule(self):
        k = log_grid(seed=3)
        rng = np.random.default_rng(5)
        for Od in rng.uniform(0.01, 2, 12):
            p = params(Od)
            lp, up = polariton_frequencies(p, k)
            s, c = mixing_sin_cos(p, k)
            assert np.abs(s**2 + c**2 - 1).max() < 1e-12
            sum_rule = (k**2 / lp**2) * c**2 + (k**2 / up**2) * s**2
            target = 1.0 + Od**2
            assert (np.abs(sum_rule - target) / target).max() < 1e-11

    def test_gap_edges(self):
        p = params(1.3)
        _, up0 = polariton_frequencies(p, 0.0)
        assert up0 == pytest.approx(p.omega_d_dressed, rel=1e-14)
        lp_far, _ = polariton_frequencies(p, 1e3)
        assert lp_far == pytest.approx(p.omega_d, rel=1e-4)


class TestMixingAngle:
    def test_resonant_symmetric_limit(self):
        # Omega_d -> 0+ at omega_k = omega_d approaches pi/4; the exact
        # degenerate point takes it by convention
        assert mixing_angle(params(0.0), 1.0) == pytest.approx(np.pi / 4)
        assert mixing_angle(params(1e-8), 1.0) == pytest.approx(np.pi / 4, abs=1e-6)

    def test_golden_point(self):
        s, c = mixing_sin_cos(GOLD, 1.0)
        assert c**2 == pytest.approx(COS2, abs=1e-12)
        assert s**2 == pytest.approx(SIN2, abs=1e-12)

    def test_decoupled_photonic(self):
        assert mixing_angle(params(0.0), 0.5) == 0.0
        assert mixing_angle(params(0.0), 2.0) == pytest.approx(np.pi / 2)

    def test_two_closed_forms_agree(self):
        k = log_grid(seed=13)
        rng = np.random.default_rng(17)
        for Od in rng.uniform(0.01, 2, 10):
            p = params(Od)
            s1, c1 = mixing_sin_cos(p, k)
            s2, c2 = mixing_sin_cos_from_frequencies(p, k)
            assert np.abs(s1 - s2).max() < 1e-12
            assert np.abs(c1 - c2).max() < 1e-12

    def test_range(self):
        k = log_grid(seed=19)
        theta = mixing_angle(params(1.7), k)
        assert np.all(theta >= 0) and np.all(theta <= np.pi / 2)


class TestEmitterPolaritonRabi:
    def test_bare_resonant_cavity(self):
        p = params(0.0, omega_e=0.5)
        lp, up = emitter_polariton_rabi(p, 0.5)
        assert lp == pytest.approx(p.Omega_e, rel=1e-14)
        assert up == 0.0

    def test_golden_enhancement(self):
        p = SystemParams(Omega_d=1.0, omega_e=W_LP, Omega_e=0.1)
        lp, _ = emitter_polariton_rabi(p, 1.0)
        # sqrt(1/(w_lp*w_lp)) * cos(theta) = 1.376382...
        assert lp / p.Omega_e == pytest.approx(1.3763819204711736, rel=1e-12)

    def test_zero_k(self):
        assert emitter_polariton_rabi(GOLD, 0.0) == (0.0, 0.0)

    def test_photonic_weight_conserved_weak_dressing(self):
        we = 0.77
        p = SystemParams(Omega_d=1e-4, omega_e=we, Omega_e=0.01)
        lp, up = emitter_polariton_rabi(p, we)
        total = (lp**2 + up**2) / p.Omega_e**2
        assert abs(total - 1.0) < 1e-6

    def test_photonic_weight_violated_usc(self):
        we = W_LP
        p = SystemParams(Omega_d=1.0, omega_e=we, Omega_e=0.01)
        lp, up = emitter_polariton_rabi(p, we)
        total = (lp**2 + up**2) / p.Omega_e**2
        assert abs(total - 1.0) > 0.10


class TestThreeModeSpectrum:
    def test_decoupled(self):
        p = SystemParams(Omega_d=0.0, omega_e=0.5, Omega_e=0.0)
        s = three_mode_spectrum(p, 1.7)
        np.testing.assert_allclose(np.sort(s.omega), [0.5, 1.0, 1.7], rtol=1e-14)
        for row in s.weights:
            assert np.sort(row)[-1] == pytest.approx(1.0)

    def test_reduces_to_two_mode(self):
        p = SystemParams(Omega_d=1.0, omega_e=0.5, Omega_e=0.0)
        s = three_mode_spectrum(p, 1.2)
        lp, up = polariton_frequencies(p, 1.2)
        assert np.min(np.abs(s.omega - p.omega_e)) < 1e-14
        others = np.sort(s.omega[np.argsort(np.abs(s.omega - p.omega_e))[1:]])
        np.testing.assert_allclose(others, [lp, up], rtol=1e-12)

    def test_weights_normalized(self):
        p = SystemParams(Omega_d=1.0, omega_e=0.5, Omega_e=0.1)
        s = three_mode_spectrum(p, 0.9)
        np.testing.assert_allclose(s.weights.sum(axis=1), 1.0, atol=1e-14)
        assert np.all(s.weights >= 0) and np.all(s.weights <= 1)

    def test_anticrossing_splitting_matches_rabi(self):
        # emitter resonant with the lower branch: the gap between the two
        # eigenvalues nearest omega_e approaches Omega_lp
        p = SystemParams(Omega_d=1.0, omega_e=0.5, Omega_e=0.1)
        k_res = resonant_wavevector(p, "lp")
        O_lp, _ = emitter_polariton_rabi(
            SystemParams(Omega_d=1.0, omega_e=p.omega_e, Omega_e=p.Omega_e), k_res)
        ks = np.linspace(0.9 * k_res, 1.1 * k_res, 301)
        gaps = []
        for k in ks:
            w = three_mode_spectrum(p, k).omega
            above = w[w > p.omega_e]
            below = w[w < p.omega_e]
            gaps.append(above.min() - below.max())
        assert min(gaps) == pytest.approx(O_lp, rel=0.10)

    def test_quadratic_convergence_to_two_mode(self):
        lp, up = polariton_frequencies(params(1.0), 0.9)
        errs = []
        for Oe in (1e-3, 2e-3):
            p = SystemParams(Omega_d=1.0, omega_e=0.5, Omega_e=Oe)
            w = three_mode_spectrum(p, 0.9).omega
            err = max(np.abs(w - lp).min(), np.abs(w - up).min())
            errs.append(err)
        ratio = errs[1] / errs[0]
        assert 3.0 < ratio < 5.0  # deviation scales with Omega_e^2

    def test_dominant_labels(self):
        p = SystemParams(Omega_d=1.0, omega_e=0.5, Omega_e=0.1)
        s = three_mode_spectrum(p, 3.0)
        assert s.dominant(2) == "photon"  # top branch follows the light line


class TestResonantWavevector:
    def test_bare_photon_line(self):
        p = SystemParams(Omega_d=0.0, omega_e=0.5, Omega_e=0.1)
        assert resonant_wavevector(p, "lp") == pytest.approx(0.5, rel=1e-10)

    def test_golden_inversion(self):
        p = SystemParams(Omega_d=1.0, omega_e=W_LP, Omega_e=0.1)
        assert resonant_wavevector(p, "lp") == pytest.approx(1.0, rel=1e-9)

    def test_gap_error_names_edges(self):
        p = SystemParams(Omega_d=1.0, omega_e=1.2, Omega_e=0.1)
        with pytest.raises(GapError) as exc:
            resonant_wavevector(p, "lp")
        assert "1" in str(exc.value) and "1.414" in str(exc.value)

    def test_out_of_range(self):
        p = SystemParams(Omega_d=1.0, omega_e=0.5, Omega_e=0.1)
        with pytest.raises(DomainError):
            resonant_wavevector(p, "up")       # below the upper edge
        p2 = SystemParams(Omega_d=1.0, omega_e=2.5, Omega_e=0.1)
        with pytest.raises(DomainError):
            resonant_wavevector(p2, "lp")      # above the lower branch

    def test_upper_branch(self):
        p = SystemParams(Omega_d=1.0, omega_e=2.0, Omega_e=0.1)
        k = resonant_wavevector(p, "up")
        assert polariton_frequencies(p, k)[1] == pytest.approx(2.0, rel=1e-10)
