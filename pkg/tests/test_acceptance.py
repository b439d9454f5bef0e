"""Acceptance suite: one test per release criterion, each printing a
PASS line with the measured figure of merit (run with -s to stream them).
"""

import time

import numpy as np
import pytest

from uscpol.classical import (
    classical_dispersion_roots, classical_purcell, permittivity_hopfield,
    permittivity_matrix, transmission, transmission_map,
)
from uscpol.correlator import (
    correlator_tm0_fourier, effective_potential, gap_center, kernel_K,
    potential_hankel_oracle,
)
from uscpol.emission import purcell_rates
from uscpol.hopfield import (
    emitter_polariton_rabi, mixing_weights, polariton_frequencies,
    resonant_wavevector, three_mode_spectrum,
)
from uscpol.params import SystemParams
from uscpol.tomography import (
    default_window, detect_peaks, minimal_anticrossing, tomography_sweep,
)
from uscpol.vacuum import (
    displacement_fluctuations, virtual_populations, zero_point_shift,
)

W_LP = np.sqrt((3.0 - np.sqrt(5.0)) / 2.0)


def params(Omega_d, omega_e=0.5, Omega_e=0.1, **kw):
    return SystemParams(Omega_d=Omega_d, omega_e=omega_e, Omega_e=Omega_e, **kw)


def report(n, text):
    print(f"PASS criterion {n}: {text}")


def sample_sweep(n=10_000, seed=20240613):
    rng = np.random.default_rng(seed)
    Od = rng.uniform(0.0, 2.0, n)
    k = 10.0 ** rng.uniform(-3.0, 3.0, n)
    return Od, k


def test_criterion_01_algebraic_invariants():
    Od, k = sample_sweep()
    worst = {"product": 0.0, "trace": 0.0, "pythagoras": 0.0, "sum_rule": 0.0}
    for Od_val in np.unique(np.round(Od, 3)):
        sel = np.round(Od, 3) == Od_val
        p = params(Od_val)
        kk = k[sel]
        lp, up = polariton_frequencies(p, kk)
        sin2, cos2 = mixing_weights(p, kk)
        target_tr = kk**2 + 1.0 + Od_val**2
        worst["product"] = max(worst["product"],
                               (np.abs(lp * up - kk) / kk).max())
        worst["trace"] = max(worst["trace"],
                             (np.abs(lp**2 + up**2 - target_tr) / target_tr).max())
        worst["pythagoras"] = max(worst["pythagoras"],
                                  np.abs(sin2 + cos2 - 1.0).max())
        sr = (kk**2 / lp**2) * cos2 + (kk**2 / up**2) * sin2
        target_sr = 1.0 + Od_val**2
        worst["sum_rule"] = max(worst["sum_rule"],
                                (np.abs(sr - target_sr) / target_sr).max())
    for name, err in worst.items():
        assert err <= 1e-11, f"{name} identity violated at {err:.3e}"
    report(1, "algebraic invariants on 10^4 samples, worst rel err "
              f"{max(worst.values()):.2e} <= 1e-11")


def test_criterion_02_displacement_dual_form():
    Od, k = sample_sweep()
    rng = np.random.default_rng(7)
    we = rng.uniform(0.1, 3.0, Od.size)
    worst = 0.0
    for i in range(Od.size):
        p = params(max(Od[i], 1e-9), omega_e=we[i])
        d2 = displacement_fluctuations(p, k[i])
        O_lp, O_up = emitter_polariton_rabi(p, k[i])
        alt = (we[i] / k[i]) * (O_lp**2 + O_up**2) / p.Omega_e**2
        worst = max(worst, abs(d2 - alt) / d2)
    assert worst <= 1e-11
    bare = params(0.0)
    for kk in (0.1, 1.0, 7.3):
        assert displacement_fluctuations(bare, kk) == 1.0
    report(2, f"displacement dual-form worst rel err {worst:.2e} <= 1e-11 "
              "on the 10^4 sweep; bare-vacuum ratio exactly 1")


def test_criterion_03_quantum_classical_equivalence():
    p = params(1.0, omega_e=0.5, Omega_e=0.1).lossless()
    worst = 0.0
    for k in np.linspace(0.01, 3.0, 100):
        roots = classical_dispersion_roots(p, k)
        eigs = three_mode_spectrum(p, k).omega
        assert roots.size == 3
        worst = max(worst, np.abs(roots - eigs).max())
    assert worst <= 1e-9
    rates = []
    for branch, omega_e in (("lp", W_LP), ("up", 1.9)):
        pe = SystemParams(Omega_d=1.0, omega_e=omega_e, Omega_e=0.01,
                          gamma_c=0.01, kappa_d=0.02, kappa_e=0.02)
        k_star = resonant_wavevector(pe, branch)
        classical = classical_purcell(pe, branch, k_star, "cavity")
        quantum = purcell_rates(pe, k_star, "cavity")[0 if branch == "lp" else 1]
        rates.append(abs(classical - quantum))
        assert abs(classical - quantum) <= 1e-9
    report(3, f"dispersion roots match eigenfrequencies to {worst:.2e} <= 1e-9; "
              f"Purcell rates agree to {max(rates):.2e} <= 1e-9")


def test_criterion_04_correlator_decomposition():
    p = params(1.0)
    lo, hi = p.gap
    k = 10.0 ** np.linspace(-3, 3, 400)
    worst = 0.0
    for w in np.linspace(lo + 1e-3, hi - 1e-3, 11):
        K = kernel_K(p, k, w)
        assert np.all(K <= 0.0), "kernel positive inside the gap"
        lhs = np.array([2.0 * correlator_tm0_fourier(p, kk, w).real for kk in k])
        rhs = -1.0 + (p.Omega_d**2 / p.omega_d**2) * p.omega_d / (w - p.omega_d) + K
        scale = np.maximum(np.abs(lhs), 1.0)
        worst = max(worst, (np.abs(lhs - rhs) / scale).max())
    assert worst <= 1e-11
    report(4, f"correlator decomposition worst rel err {worst:.2e} <= 1e-11; "
              "kernel <= 0 throughout the gap")


def fit_slope(r, u, lo, hi):
    m = (r >= lo) & (r <= hi)
    return np.polyfit(np.log(r[m]), np.log(np.abs(u[m])), 1)[0]


def test_criterion_05_gap_potential_scaling():
    t0 = time.time()
    p = params(1.0)
    w_center = gap_center(p)
    r = np.geomspace(0.05, 10.0, 220)
    prof = effective_potential(p, w_center, r, n_grid=2048, k_max=64.0)
    slope_mid = fit_slope(r, prof.u, 0.1, 1.0)
    slope_far = fit_slope(r, prof.u, 2.5, 6.0)
    assert abs(slope_mid - (-1.0)) <= 0.3, f"mid slope {slope_mid:.3f}"
    assert abs(slope_far - (-4.0)) <= 0.3, f"far slope {slope_far:.3f}"
    r_cmp = np.geomspace(0.05, 5.0, 25)
    oracle = potential_hankel_oracle(p, w_center, r_cmp)
    dft = effective_potential(p, w_center, r_cmp, n_grid=2048, k_max=64.0)
    rel = np.abs(dft.u - oracle) / np.abs(oracle)
    assert rel.max() <= 0.01
    elapsed = time.time() - t0
    assert elapsed <= 300.0
    report(5, f"gap-center potential: slope[0.1,1] = {slope_mid:.3f} (-1 +/- 0.3), "
              f"slope[2.5,6] = {slope_far:.3f} (-4 +/- 0.3), DFT vs Hankel "
              f"max rel {rel.max():.2e} <= 1% in {elapsed:.1f} s")


def test_criterion_06_resonant_vacuum_values():
    p = params(1.0)
    n_ph, n_d = virtual_populations(p, 1.0)
    assert n_ph == pytest.approx(0.059017, abs=1e-6)
    assert n_d == pytest.approx(0.059017, abs=1e-6)
    dw, n_int = zero_point_shift(p, 1.0)
    assert abs(n_int) <= 1e-9
    lp, up = polariton_frequencies(p, 1.0)
    route_a = 0.5 * (lp + up) - 1.0
    route_b = 1.0 * n_ph + 1.0 * n_d  # n_int = 0 at resonance
    assert abs(dw - route_a) <= 1e-11
    assert abs(dw - route_b) <= 1e-11
    report(6, f"resonant vacuum: n_ph = n_d = {n_ph:.6f} (0.059017 +/- 1e-6), "
              f"n_int = {n_int:.2e}, zero-point shift routes agree to "
              f"{abs(route_a - route_b):.2e}")


def test_criterion_07_purcell_asymmetry():
    p = params(1.0, gamma_c=0.01)
    G_lp, G_up = purcell_rates(p, 1.0, "cavity")
    lp, up = polariton_frequencies(p, 1.0)
    assert G_lp / G_up == pytest.approx((up / lp) ** 2, rel=1e-12)
    assert abs(G_lp / G_up - 6.854) <= 1e-3
    report(7, f"cavity-dominated Purcell ratio {G_lp / G_up:.6f} = "
              "(w_up/w_lp)^2 = 6.854 +/- 1e-3")


def _fixed_grid_median(p, curves):
    from uscpol.hopfield import mixing_sin_cos
    lo = max(c.k[0] for c in curves)
    hi = min(c.k[-1] for c in curves)
    ks = np.linspace(lo, hi, 50)
    s, c = mixing_sin_cos(p, ks)
    analytic = s / c
    out = []
    for cu in curves:
        rec = np.interp(ks, cu.k, cu.tan_theta_rec)
        out.append(float(np.median(np.abs(rec - analytic) / analytic)))
    return out


def test_criterion_08_tomography_end_to_end():
    t0 = time.time()
    p = SystemParams(Omega_d=1.0, omega_e=0.5, Omega_e=0.2,
                     gamma_c=0.01, kappa_d=0.05, kappa_e=0.05)
    sweep = np.concatenate([np.linspace(0.30, 0.95, 20),
                            np.linspace(1.45, 2.60, 20)])
    omega_grid = lambda n: np.linspace(0.05, 3.2, n)
    k_grid = lambda n: np.linspace(0.02, 3.5, n)
    headline = tomography_sweep(p, sweep, k_grid(400), omega_grid(2000))
    assert headline.median_rel_error < 0.10
    # errors grow toward small k where the upper-polariton coupling fades
    quarter = headline.k <= np.quantile(headline.k, 0.25)
    assert headline.rel_error[quarter].mean() > np.median(headline.rel_error)
    coarse = tomography_sweep(p, sweep, k_grid(100), omega_grid(500))
    halved = tomography_sweep(p, sweep, k_grid(200), omega_grid(1000))
    med_coarse, med_halved = _fixed_grid_median(p, [coarse, halved])
    assert med_halved < med_coarse
    elapsed = time.time() - t0
    assert elapsed <= 600.0
    report(8, f"tomography median rel err {headline.median_rel_error:.4f} < 0.10 "
              f"on 400x2000; halving grid steps: {med_coarse:.4f} -> "
              f"{med_halved:.4f}; low-k errors dominate; {elapsed:.1f} s")


def test_criterion_09_transmission_sanity():
    # decoupled matter slabs; their linewidths are irrelevant but keep the
    # matter block regular at omega = omega_d
    bare = SystemParams(Omega_d=0.0, omega_e=0.5, Omega_e=0.0,
                        gamma_c=0.01, kappa_d=0.05, kappa_e=0.05)
    worst = 0.0
    for wk in (0.25, 0.7, 1.0, 2.0):
        expected = 1.0 / np.sqrt(1.0 + bare.gamma_c**2 / (16 * wk**2))
        worst = max(worst, abs(abs(transmission(bare, wk, wk)) - expected))
    assert worst <= 1e-9
    p = SystemParams(Omega_d=1.0, omega_e=0.7, Omega_e=0.2,
                     gamma_c=0.01, kappa_d=0.05, kappa_e=0.05)
    k_grid = np.linspace(0.3, 2.8, 57)
    smap = transmission_map(p, k_grid, np.linspace(0.05, 3.2, 2000))
    rec = minimal_anticrossing(smap, p)
    i0 = int(np.argmin(np.abs(k_grid - rec.k_x)))
    col = smap.intensity()[i0]
    peaks = detect_peaks(smap.omega_grid, col, 5e-3 * col.max())
    near = peaks.omegas[np.abs(peaks.omegas - p.omega_e) <= default_window(p) / 2]
    assert near.size == 2
    assert (near < p.omega_e).sum() == 1 and (near > p.omega_e).sum() == 1
    k_star = resonant_wavevector(p, "lp")
    dk = k_grid[1] - k_grid[0]
    assert abs(rec.k_x - k_star) <= dk
    report(9, f"bare |T| peak to {worst:.2e} <= 1e-9; anticrossing doublet straddles "
              f"omega_e; k_x off by {abs(rec.k_x - k_star) / dk:.2f} grid steps")


def test_criterion_10_permittivity_forms():
    single = params(1.0, Omega_e=0.0, omega_e=0.5).lossless()
    worst = 0.0
    for w in np.linspace(0.05, 3.0, 200):
        if abs(w - 1.0) < 0.05:
            continue  # dresser pole
        target = 1.0 + 1.0 / (1.0 - w * w)
        worst = max(worst, abs(permittivity_matrix(single, w).real - target)
                    / max(abs(target), 1.0))
    assert worst <= 1e-11
    small = SystemParams(Omega_d=1e-3, omega_e=0.8, Omega_e=1e-3,
                         gamma_c=0.0, kappa_d=0.0, kappa_e=0.0)
    series_worst = max(abs(permittivity_matrix(small, w) - permittivity_hopfield(small, w))
                       for w in (0.3, 0.5, 1.4, 2.0))
    assert series_worst < 1e-10
    # pinned finite-coupling regression: with wbar^2 = w0^2 + Omega^2 the
    # Clausius-Mossotti form is the same rational function as the matrix
    # form, so the measured discrepancy is pure rounding
    probe = SystemParams(Omega_d=1.0, omega_e=0.8, Omega_e=0.1,
                         gamma_c=0.0, kappa_d=0.0, kappa_e=0.0)
    e_m = permittivity_matrix(probe, 0.5)
    e_h = permittivity_hopfield(probe, 0.5)
    assert e_m.real == pytest.approx(2.4778761061946906, rel=1e-12)
    discrepancy = abs(e_m - e_h)
    assert discrepancy <= 1e-12
    report(10, f"matrix form reduces to single-slab to {worst:.2e} <= 1e-11; "
               f"small-coupling gap {series_worst:.2e} < 1e-10; finite-coupling "
               f"discrepancy at Omega_d = 1 pinned at {discrepancy:.2e} "
               "(forms are algebraically identical)")
