"""Vacuum-state observables of the dressed cavity field.

All quantities are dimensionless ratios against the bare-cavity values;
k = 0 is excluded everywhere because the lower polariton frequency
vanishes there (grid builders should start at k_min ~ 1e-3).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hopfield import mixing_weights, polariton_frequencies
from .params import SystemParams

__all__ = [
    "VacuumObservables",
    "displacement_fluctuations",
    "efield_fluctuations",
    "efield_fluctuations_longform",
    "zero_point_amplitudes",
    "virtual_populations",
    "zero_point_shift",
    "vacuum_point",
    "vacuum_table",
]


@dataclass(frozen=True)
class VacuumObservables:
    """Per-wavevector vacuum observables (see module functions)."""

    k: float
    d2_ratio: float
    e2_ratio: float
    dzp_lp: float
    dzp_up: float
    n_ph: float
    n_d: float
    n_int: float
    dw_zp: float


def _require_positive_k(omega_k):
    if np.any(np.asarray(omega_k) <= 0):
        raise DomainError("omega_k must be > 0 (omega_lp vanishes at k = 0)")


def displacement_fluctuations(p: SystemParams, omega_k):
    """<D_k^2> over the bare-cavity value.

    (omega_k/omega_up) sin^2(theta) + (omega_k/omega_lp) cos^2(theta);
    reduces to 1 for Omega_d = 0.
    """
    _require_positive_k(omega_k)
    omega_k = np.asarray(omega_k, dtype=float)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    sin2, cos2 = mixing_weights(p, omega_k)
    out = (omega_k / omega_up) * sin2 + (omega_k / omega_lp) * cos2
    return float(out) if np.ndim(out) == 0 else out


def zero_point_amplitudes(p: SystemParams, omega_k):
    """Branch shares (dzp_lp, dzp_up) of |D^zp|^2 in units of eps0*hbar*omega_e/(2 S L_c).

    Equal to (Omega_lp/Omega_e)^2 and (Omega_up/Omega_e)^2.
    """
    omega_k = np.asarray(omega_k, dtype=float)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    sin2, cos2 = mixing_weights(p, omega_k)
    omega_lp = np.asarray(omega_lp, dtype=float)
    omega_up = np.asarray(omega_up, dtype=float)
    lp = np.where(omega_lp > 0,
                  omega_k**2 / (p.omega_e * np.where(omega_lp > 0, omega_lp, 1.0)) * cos2,
                  0.0)
    up = np.where(omega_up > 0,
                  omega_k**2 / (p.omega_e * np.where(omega_up > 0, omega_up, 1.0)) * sin2,
                  0.0)
    if lp.ndim == 0:
        return float(lp), float(up)
    return lp, up


def efield_fluctuations(p: SystemParams, omega_k):
    """<E_k^2> ratio: (1 + Omega_d^2/(omega_d*omega_k)) times the D^2 ratio."""
    _require_positive_k(omega_k)
    omega_k = np.asarray(omega_k, dtype=float)
    out = (1.0 + p.Omega_d**2 / (p.omega_d * omega_k)) * displacement_fluctuations(p, omega_k)
    return float(out) if np.ndim(out) == 0 else out


def efield_fluctuations_longform(p: SystemParams, omega_k):
    """Same ratio from the explicit four-term sum (field + dresser polarization).

    Kept as an independent evaluation route for cross-checking the
    product form above.
    """
    _require_positive_k(omega_k)
    omega_k = np.asarray(omega_k, dtype=float)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    sin2, cos2 = mixing_weights(p, omega_k)
    r = p.Omega_d**2 / p.omega_d**2
    out = ((omega_k / omega_up) * sin2 + (omega_k / omega_lp) * cos2
           + r * ((omega_lp / omega_k) * sin2 + (omega_up / omega_k) * cos2))
    return float(out) if np.ndim(out) == 0 else out


def virtual_populations(p: SystemParams, omega_k):
    """Virtual photon and dresser populations (n_ph, n_d) in the dressed vacuum.

    Note the branch swap between the two: the photon population pairs
    sin^2 with the upper branch while the dresser population pairs sin^2
    with the lower one.
    """
    _require_positive_k(omega_k)
    omega_k = np.asarray(omega_k, dtype=float)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    sin2, cos2 = mixing_weights(p, omega_k)
    n_ph = (sin2 / (4 * omega_k) * (omega_up**2 + omega_k**2) / omega_up
            + cos2 / (4 * omega_k) * (omega_lp**2 + omega_k**2) / omega_lp
            - 0.5)
    n_d = (sin2 / (4 * p.omega_d) * (omega_lp**2 + p.omega_d**2) / omega_lp
           + cos2 / (4 * p.omega_d) * (omega_up**2 + p.omega_d**2) / omega_up
           - 0.5)
    n_ph = np.maximum(n_ph, 0.0)  # clamp -0.0-level rounding
    n_d = np.maximum(n_d, 0.0)
    if np.ndim(n_ph) == 0:
        return float(n_ph), float(n_d)
    return n_ph, n_d


def zero_point_shift(p: SystemParams, omega_k):
    """Differential zero-point frequency and interaction energy (dw_zp, n_int).

    dw_zp = (omega_up + omega_lp)/2 - (omega_k + omega_d)/2; n_int is
    solved from dw_zp = omega_k*n_ph + omega_d*n_d + Omega_d*n_int, which
    doubles as a consistency check of that decomposition.  n_int := 0
    when Omega_d = 0.
    """
    _require_positive_k(omega_k)
    omega_k = np.asarray(omega_k, dtype=float)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    dw_zp = 0.5 * (omega_up + omega_lp) - 0.5 * (omega_k + p.omega_d)
    if p.Omega_d == 0:
        n_int = np.zeros_like(dw_zp)
    else:
        n_ph, n_d = virtual_populations(p, omega_k)
        n_int = (dw_zp - omega_k * n_ph - p.omega_d * n_d) / p.Omega_d
    if np.ndim(dw_zp) == 0:
        return float(dw_zp), float(n_int)
    return dw_zp, n_int


def vacuum_point(p: SystemParams, k: float, dispersion=None) -> VacuumObservables:
    from .params import LINEAR_TM0
    omega_k = float((dispersion or LINEAR_TM0).omega(k))
    d2 = displacement_fluctuations(p, omega_k)
    e2 = efield_fluctuations(p, omega_k)
    dzp_lp, dzp_up = zero_point_amplitudes(p, omega_k)
    n_ph, n_d = virtual_populations(p, omega_k)
    dw_zp, n_int = zero_point_shift(p, omega_k)
    return VacuumObservables(float(k), d2, e2, dzp_lp, dzp_up, n_ph, n_d, n_int, dw_zp)


def vacuum_table(p: SystemParams, k_grid, dispersion=None):
    """Column arrays for the vacuum CSV."""
    from .params import LINEAR_TM0
    k = np.asarray(k_grid, dtype=float)
    omega_k = (dispersion or LINEAR_TM0).omega(k)
    d2 = displacement_fluctuations(p, omega_k)
    e2 = efield_fluctuations(p, omega_k)
    dzp_lp, dzp_up = zero_point_amplitudes(p, omega_k)
    n_ph, n_d = virtual_populations(p, omega_k)
    dw_zp, n_int = zero_point_shift(p, omega_k)
    return {
        "k": k, "d2_ratio": d2, "e2_ratio": e2,
        "dzp_lp": dzp_lp, "dzp_up": dzp_up,
        "n_ph": n_ph, "n_d": n_d, "n_int": n_int, "dw_zp": dw_zp,
    }
