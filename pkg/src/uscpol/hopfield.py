"""Cavity-dresser polariton diagonalization.

Two-mode closed forms (frequencies, hybridization angle, emitter-polariton
Rabi couplings) plus the full three-mode eigenproblem used for spectra
where the emitter back-action is kept.

The 2x2 quadratic form in canonical coordinates is
    [[Omega_X, G], [G, Omega_A]]
with Omega_X = omega_d^2 + Omega_d^2, Omega_A = omega_k^2, G = Omega_d*omega_k.
Its eigenvalues obey the exact identities
    omega_lp * omega_up = omega_k * omega_d
    omega_lp^2 + omega_up^2 = omega_k^2 + omega_d^2 + Omega_d^2
which the implementation preserves to machine precision by computing
omega_up from the (cancellation-free) sum and omega_lp from the product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GapError, RootFindingError
from .params import LINEAR_TM0, SystemParams

__all__ = [
    "BranchPoint",
    "ThreeModeSpectrum",
    "polariton_frequencies",
    "mixing_angle",
    "mixing_weights",
    "mixing_sin_cos",
    "mixing_sin_cos_from_frequencies",
    "emitter_polariton_rabi",
    "three_mode_spectrum",
    "resonant_wavevector",
    "branch_point",
    "branch_table",
]


@dataclass(frozen=True)
class BranchPoint:
    """Two-mode polariton data at one in-plane wavevector."""

    k: float
    omega_k: float
    omega_lp: float
    omega_up: float
    theta: float
    Omega_lp: float
    Omega_up: float


@dataclass(frozen=True)
class ThreeModeSpectrum:
    """Sorted eigenfrequencies and (photon, dresser, emitter) weights.

    weights[i] holds the squared eigenvector components of branch i,
    normalized so each row sums to 1.
    """

    k: float
    omega: np.ndarray        # shape (3,), ascending
    weights: np.ndarray      # shape (3, 3), rows = branches

    def dominant(self, i: int) -> str:
        # ties broken photon > dresser > emitter
        return ("photon", "dresser", "emitter")[int(np.argmax(self.weights[i]))]


def _quadratic_form(p: SystemParams, omega_k):
    omega_k = np.asarray(omega_k, dtype=float)
    Omega_X = p.omega_d**2 + p.Omega_d**2
    Omega_A = omega_k**2
    G = p.Omega_d * omega_k
    return Omega_X, Omega_A, G


def polariton_frequencies(p: SystemParams, omega_k):
    """Two-mode eigenfrequencies (omega_lp, omega_up) at cavity frequency omega_k.

    Accepts scalars or arrays; omega_k must be >= 0.  The pair is always
    real and non-negative (the quadratic form is positive semidefinite).
    """
    omega_k = np.asarray(omega_k, dtype=float)
    if np.any(omega_k < 0):
        raise DomainError("omega_k must be >= 0")
    Omega_X, Omega_A, G = _quadratic_form(p, omega_k)
    disc = np.sqrt((Omega_X - Omega_A) ** 2 + 4.0 * G * G)
    omega_up = np.sqrt(0.5 * (Omega_X + Omega_A + disc))
    # lower root via the exact product identity; avoids cancellation
    omega_lp = np.where(omega_up > 0, p.omega_d * omega_k / np.where(omega_up > 0, omega_up, 1.0), 0.0)
    if omega_lp.ndim == 0:
        return float(omega_lp), float(omega_up)
    return omega_lp, omega_up


def mixing_weights(p: SystemParams, omega_k):
    """(sin^2 theta, cos^2 theta) with the pair summing to exactly 1.

    The half-angle expressions 1/2*(1 -/+ M/D) with M = Omega_X - Omega_A
    and D = sqrt(M^2 + 4G^2) cancel badly when |M| ~ D, so the smaller
    weight is evaluated through D^2 - M^2 = 4G^2 and the larger one is
    its exact complement.
    """
    omega_k = np.asarray(omega_k, dtype=float)
    Omega_X, Omega_A, G = _quadratic_form(p, omega_k)
    M = Omega_X - Omega_A
    D = np.sqrt(M * M + 4.0 * G * G)
    degenerate = D == 0.0  # only at Omega_d = 0, omega_k = omega_d
    Dsafe = np.where(degenerate, 1.0, D)
    den_minus = Dsafe * (Dsafe - M)
    den_plus = Dsafe * (Dsafe + M)
    raw_cos2 = np.where(M >= 0, 0.5 * (1.0 + M / Dsafe),
                        2.0 * G * G / np.where(den_minus > 0, den_minus, 1.0))
    raw_sin2 = np.where(M <= 0, 0.5 * (1.0 - M / Dsafe),
                        2.0 * G * G / np.where(den_plus > 0, den_plus, 1.0))
    cos2 = np.where(degenerate, 0.5,
                    np.where(raw_cos2 <= 0.5, raw_cos2, 1.0 - raw_sin2))
    sin2 = 1.0 - cos2
    if sin2.ndim == 0:
        return float(sin2), float(cos2)
    return sin2, cos2


def mixing_sin_cos(p: SystemParams, omega_k):
    """(sin theta, cos theta), both non-negative, from the canonical closed form."""
    sin2, cos2 = mixing_weights(p, omega_k)
    sin_t, cos_t = np.sqrt(sin2), np.sqrt(cos2)
    if np.ndim(sin_t) == 0:
        return float(sin_t), float(cos_t)
    return sin_t, cos_t


def mixing_sin_cos_from_frequencies(p: SystemParams, omega_k):
    """Same angle from the eigenfrequency quotients.

    cos^2 = (omega_up^2 - omega_k^2) / (omega_up^2 - omega_lp^2), rewritten
    through the trace identity as (omega_d^2 + Omega_d^2 - omega_lp^2)
    over the same denominator so that large-k cancellation is avoided.
    Kept as an independent cross-check of :func:`mixing_sin_cos`.
    """
    omega_k = np.asarray(omega_k, dtype=float)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    omega_lp = np.asarray(omega_lp, dtype=float)
    omega_up = np.asarray(omega_up, dtype=float)
    den = omega_up**2 - omega_lp**2
    degenerate = den == 0.0
    densafe = np.where(degenerate, 1.0, den)
    wbar2 = p.omega_d**2 + p.Omega_d**2
    cos2 = np.where(degenerate, 0.5, (wbar2 - omega_lp**2) / densafe)
    sin2 = np.where(degenerate, 0.5, (omega_k**2 - omega_lp**2) / densafe)
    sin_t = np.sqrt(np.clip(sin2, 0.0, 1.0))
    cos_t = np.sqrt(np.clip(cos2, 0.0, 1.0))
    if sin_t.ndim == 0:
        return float(sin_t), float(cos_t)
    return sin_t, cos_t


def mixing_angle(p: SystemParams, omega_k):
    """Hybridization angle theta in [0, pi/2].

    At the degenerate point Omega_d = 0, omega_k = omega_d the limit
    convention theta = pi/4 applies.
    """
    sin_t, cos_t = mixing_sin_cos(p, omega_k)
    theta = np.arctan2(sin_t, cos_t)
    if np.ndim(theta) == 0:
        return float(theta)
    return theta


def emitter_polariton_rabi(p: SystemParams, omega_k):
    """Emitter-polariton Rabi couplings (Omega_lp, Omega_up).

    Omega_lp/Omega_e = sqrt(omega_k^2/(omega_e*omega_lp)) cos(theta) and
    the sin(theta) analogue for the upper branch; both vanish at
    omega_k = 0 where the photon prefactor dies.
    """
    omega_k = np.asarray(omega_k, dtype=float)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    sin_t, cos_t = mixing_sin_cos(p, omega_k)
    omega_lp = np.asarray(omega_lp, dtype=float)
    omega_up = np.asarray(omega_up, dtype=float)
    lp = np.where(omega_lp > 0,
                  p.Omega_e * np.sqrt(omega_k**2 / (p.omega_e * np.where(omega_lp > 0, omega_lp, 1.0))) * cos_t,
                  0.0)
    up = np.where(omega_up > 0,
                  p.Omega_e * np.sqrt(omega_k**2 / (p.omega_e * np.where(omega_up > 0, omega_up, 1.0))) * sin_t,
                  0.0)
    if lp.ndim == 0:
        return float(lp), float(up)
    return lp, up


def branch_point(p: SystemParams, k: float,
                 dispersion=LINEAR_TM0) -> BranchPoint:
    omega_k = float(dispersion.omega(k))
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    theta = mixing_angle(p, omega_k)
    Olp, Oup = emitter_polariton_rabi(p, omega_k)
    return BranchPoint(float(k), omega_k, omega_lp, omega_up, theta, Olp, Oup)


def branch_table(p: SystemParams, k_grid, dispersion=LINEAR_TM0):
    """Vectorized BranchPoint columns for CSV emission.

    Returns a dict of equally-shaped arrays keyed by column name.
    """
    k = np.asarray(k_grid, dtype=float)
    omega_k = dispersion.omega(k)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    sin_t, cos_t = mixing_sin_cos(p, omega_k)
    theta = np.arctan2(sin_t, cos_t)
    Olp, Oup = emitter_polariton_rabi(p, omega_k)
    return {
        "k": k, "omega_k": omega_k,
        "omega_lp": omega_lp, "omega_up": omega_up,
        "theta": theta, "Omega_lp": Olp, "Omega_up": Oup,
    }


def three_mode_spectrum(p: SystemParams, omega_k: float) -> ThreeModeSpectrum:
    """Eigenfrequencies and composition of the full photon-dresser-emitter problem.

    Diagonalizes the symmetric quadratic form in (dresser, emitter, photon)
    canonical coordinates,
        diag(omega_d^2+Omega_d^2, omega_e^2+Omega_e^2, omega_k^2)
    with couplings Omega_d*omega_k and Omega_e*omega_k to the photon
    column and none between dresser and emitter.  Weights are reported
    in (photon, dresser, emitter) order.
    """
    omega_k = float(omega_k)
    K = np.array([
        [p.omega_d**2 + p.Omega_d**2, 0.0, p.Omega_d * omega_k],
        [0.0, p.omega_e**2 + p.Omega_e**2, p.Omega_e * omega_k],
        [p.Omega_d * omega_k, p.Omega_e * omega_k, omega_k**2],
    ])
    evals, evecs = np.linalg.eigh(K)
    omega = np.sqrt(np.clip(evals, 0.0, None))
    w = evecs**2  # columns are eigenvectors in (d, e, ph) coordinates
    weights = np.column_stack([w[2], w[0], w[1]])  # -> (ph, d, e)
    weights = weights / weights.sum(axis=1, keepdims=True)
    return ThreeModeSpectrum(k=omega_k, omega=omega, weights=weights)


def resonant_wavevector(p: SystemParams, branch: str, omega_e: float | None = None,
                        dispersion=LINEAR_TM0, rel_tol: float = 1e-10) -> float:
    """Wavevector k* where the chosen branch crosses the emitter frequency.

    branch is "lp" or "up".  Raises GapError inside the polariton gap and
    DomainError outside the branch's attainable range; the lower branch
    only reaches (0, omega_d), the upper branch [sqrt(omega_d^2+Omega_d^2), inf).
    """
    if branch not in ("lp", "up"):
        raise DomainError(f"branch must be 'lp' or 'up' (got {branch!r})")
    target = p.omega_e if omega_e is None else float(omega_e)
    lower, upper = p.gap
    if lower < target < upper:
        raise GapError(target, lower, upper)
    if branch == "lp":
        if not 0 < target < lower:
            raise DomainError(
                f"omega_e = {target:.12g} outside the lower-branch range (0, {lower:.12g})")
        idx = 0
    else:
        if target < upper:
            raise DomainError(
                f"omega_e = {target:.12g} below the upper-branch edge {upper:.12g}")
        if target == upper:
            return 0.0
        idx = 1

    def f(k):
        return polariton_frequencies(p, dispersion.omega(k))[idx] - target

    k_hi = max(1.0, target / dispersion.speed)
    for _ in range(200):
        if f(k_hi) > 0:
            break
        k_hi *= 2.0
    else:
        raise RootFindingError("could not bracket the resonant wavevector",
                               brackets=(0.0, k_hi))
    k_lo = 0.0
    for _ in range(200):
        mid = 0.5 * (k_lo + k_hi)
        if f(mid) > 0:
            k_hi = mid
        else:
            k_lo = mid
        if (k_hi - k_lo) <= 1e-15 * max(1.0, k_hi):
            break
    k_star = 0.5 * (k_lo + k_hi)
    achieved = polariton_frequencies(p, dispersion.omega(k_star))[idx]
    if abs(achieved - target) > rel_tol * max(target, 1e-300):
        raise RootFindingError(
            f"bisection stalled: |omega({k_star:.12g}) - {target:.12g}| = "
            f"{abs(achieved - target):.3e}",
            brackets=(k_lo, k_hi))
    return float(k_star)
