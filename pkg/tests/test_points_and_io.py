"""Domain-type constructors and cross-format plumbing."""

import numpy as np
import pytest

from uscpol.classical import transmission_map
from uscpol.correlator import (
    correlator_point, effective_potential, gap_center, potential_hankel_oracle,
)
from uscpol.emission import emission_point
from uscpol.hopfield import branch_point, mixing_angle, polariton_frequencies
from uscpol.output import load_spectral_map, save_spectral_map
from uscpol.params import SystemParams
from uscpol.tomography import minimal_anticrossing
from uscpol.vacuum import vacuum_point


def params(**kw):
    base = dict(Omega_d=1.0, omega_e=0.5, Omega_e=0.1)
    base.update(kw)
    return SystemParams(**base)


def test_branch_point_fields():
    p = params()
    bp = branch_point(p, 1.0)
    lp, up = polariton_frequencies(p, 1.0)
    assert (bp.k, bp.omega_k) == (1.0, 1.0)
    assert bp.omega_lp == lp and bp.omega_up == up
    assert bp.theta == mixing_angle(p, 1.0)
    assert 0 <= bp.theta <= np.pi / 2


def test_vacuum_point_consistent_with_table():
    p = params()
    vp = vacuum_point(p, 0.8)
    assert vp.k == 0.8
    assert vp.d2_ratio > 1.0  # dressed vacuum exceeds the bare one
    assert vp.dzp_lp + vp.dzp_up == pytest.approx(
        (0.8 / p.omega_e) * vp.d2_ratio, rel=1e-12)


def test_emission_point_flag_and_rates():
    p = params(Omega_e=0.001, gamma_c=0.01, kappa_d=0.05)
    ep = emission_point(p, 1.0, model="cavity")
    assert ep.regime_flag == "weak"
    assert ep.Gamma_lp > ep.Gamma_up > 0


def test_correlator_point_wraps_value():
    p = params()
    cp = correlator_point(p, 1.0, 0.2)
    assert (cp.k, cp.omega) == (1.0, 0.2)
    assert cp.value.real < 0 and cp.value.imag == 0


def test_minimal_anticrossing_from_binary_map(tmp_path):
    # the tomography pipeline accepts maps rehydrated from the binary format
    p = params(omega_e=0.7, Omega_e=0.2, gamma_c=0.01, kappa_d=0.05, kappa_e=0.05)
    smap = transmission_map(p, np.linspace(0.3, 2.8, 57),
                            np.linspace(0.05, 3.2, 1500))
    path = tmp_path / "map.bin"
    save_spectral_map(path, smap, fmt="bin")
    rec_direct = minimal_anticrossing(smap, p)
    rec_loaded = minimal_anticrossing(load_spectral_map(path), p)
    assert rec_direct == rec_loaded


def test_potential_far_tail_both_routes():
    # both evaluation routes decay below 1e-6 of the profile maximum by r = 50
    p = params()
    w = gap_center(p)
    r = np.geomspace(0.05, 50.0, 60)
    prof = effective_potential(p, w, r, n_grid=2048, k_max=64.0)
    peak = np.abs(prof.u).max()
    assert abs(prof.u[-1]) < 1e-6 * peak
    tail = potential_hankel_oracle(p, w, np.array([50.0]))
    assert abs(tail[0]) < 1e-6 * peak
