"""TM0 displacement-field correlator, Fourier kernel and finite-range potential.

The lossless kernel

    K_w(k) = (wk^2/wlp^2) cos^2(th) w/(w-wlp)
           - (Od^2/wd^2) w/(w-wd)
           + (wk^2/wup^2) sin^2(th) w/(w-wup)

decays like -w/k at large k, so its 2D Fourier transform

    U_w(r) = (2 pi)^-2 integral d^2k K_w(k) exp(i k.r)
           = (1/2pi) integral_0^inf dk k K_w(k) J0(k r)

is only conditionally convergent.  Both evaluation routes therefore
split off the analytic tail

    K = K_res - w/sqrt(k^2+b^2) + c2/(k^2+b^2),    b = sqrt(wd^2+Od^2)

whose transform is -(w/2pi) e^(-b r)/r + (c2/2pi) K0(b r); the O(1/k^3)
residual K_res is handled numerically (2D FFT as the primary route,
Gauss-Legendre panels between J0 zeros as the quadrature oracle).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import j0, k0, roots_legendre

from . import _kernels
from .errors import DomainError, PoleError, ResolutionError
from .hopfield import emitter_polariton_rabi, polariton_frequencies
from .params import SystemParams

__all__ = [
    "CorrelatorPoint",
    "PotentialProfile",
    "Triplet",
    "correlator_tm0_fourier",
    "correlator_point",
    "kernel_K",
    "gap_center",
    "effective_potential",
    "potential_hankel_oracle",
    "emitter_shift_coefficients",
    "chi2_effective",
    "find_phase_matched_triplets",
]

POLE_GUARD = 1e-9


@dataclass(frozen=True)
class CorrelatorPoint:
    k: float
    omega: float
    value: complex


@dataclass(frozen=True)
class PotentialProfile:
    """Real-space potential samples plus an optional plotting normalization.

    normalization records max |U| of a reference (gap-center) profile
    used for normalized plotting; None means not normalized.
    """

    r: np.ndarray
    u: np.ndarray
    omega: float
    normalization: float | None = None

    @property
    def u_normalized(self) -> np.ndarray:
        if self.normalization is None:
            raise DomainError("profile carries no normalization record")
        return self.u / self.normalization


def correlator_tm0_fourier(p: SystemParams, k, omega,
                           gamma_lp: float = 0.0, gamma_up: float = 0.0) -> complex:
    """Per-k integrand of the TM0 displacement correlator at probe frequency omega.

    (1/2)(omega_e/Omega_e^2) [ Olp^2/(w - wlp - i glp/2) + Oup^2/(w - wup - i gup/2) ]
    with the branch linewidths supplied by the caller (zero = lossless).
    In the lossless case a probe within the pole guard of either branch
    frequency raises PoleError naming the branch.
    """
    omega_k = abs(float(k))
    omega = float(omega)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    if gamma_lp == 0.0 and abs(omega - omega_lp) < POLE_GUARD:
        raise PoleError(f"omega = {omega:.12g} sits on the lossless lower-polariton "
                        f"pole at {omega_lp:.12g}")
    if gamma_up == 0.0 and abs(omega - omega_up) < POLE_GUARD:
        raise PoleError(f"omega = {omega:.12g} sits on the lossless upper-polariton "
                        f"pole at {omega_up:.12g}")
    O_lp, O_up = emitter_polariton_rabi(p, omega_k)
    pref = 0.5 * p.omega_e / p.Omega_e**2
    return complex(pref * (O_lp**2 / (omega - omega_lp - 0.5j * gamma_lp)
                           + O_up**2 / (omega - omega_up - 0.5j * gamma_up)))


def correlator_point(p: SystemParams, k, omega,
                     gamma_lp: float = 0.0, gamma_up: float = 0.0) -> CorrelatorPoint:
    """Bundle one correlator evaluation with its coordinates."""
    return CorrelatorPoint(k=float(k), omega=float(omega),
                           value=correlator_tm0_fourier(p, k, omega,
                                                        gamma_lp, gamma_up))


def kernel_K(p: SystemParams, k, omega):
    """Lossless Fourier kernel K_omega(k); scalar or array in k.

    Finite at k = 0 (the lp weight tends to (1 + Od^2/wd^2)); raises
    PoleError when omega falls within the pole guard of wlp, wup or wd.
    """
    wk = np.abs(np.asarray(k, dtype=float))
    omega = float(omega)
    omega_lp, omega_up = polariton_frequencies(p, wk)
    if np.any(np.abs(omega - np.asarray(omega_lp)) < POLE_GUARD):
        raise PoleError(f"omega = {omega:.12g} within pole guard of the lower branch")
    if np.any(np.abs(omega - np.asarray(omega_up)) < POLE_GUARD):
        raise PoleError(f"omega = {omega:.12g} within pole guard of the upper branch")
    if abs(omega - p.omega_d) < POLE_GUARD:
        raise PoleError(f"omega = {omega:.12g} within pole guard of omega_d")
    out = _kernels.kernel_values(wk, omega, p.omega_d, p.Omega_d)
    return float(out) if np.ndim(k) == 0 else out


def gap_center(p: SystemParams) -> float:
    lo, hi = p.gap
    return 0.5 * (lo + hi)


def _require_in_gap(p: SystemParams, omega: float):
    lo, hi = p.gap
    if not lo < omega < hi:
        raise DomainError(
            f"omega = {omega:.12g} must lie strictly inside the polariton gap "
            f"({lo:.12g}, {hi:.12g})")


def _tail_coefficients(p: SystemParams, omega: float):
    """(b, c2) of the analytic large-k tail K ~ -w/k + c2/k^2.

    c2 is extracted by Richardson extrapolation of k^2 (K + w/k) at two
    large wavevectors; the stable kernel form keeps this accurate.
    """
    b = p.omega_d_dressed
    k1, k2 = 1e3, 2e3
    f1 = k1**2 * (kernel_K(p, k1, omega) + omega / k1)
    f2 = k2**2 * (kernel_K(p, k2, omega) + omega / k2)
    c2 = (k2 * f2 - k1 * f1) / (k2 - k1)
    return b, c2


def _kernel_residual(p: SystemParams, wk, omega: float, b: float, c2: float):
    return (_kernels.kernel_values(np.abs(wk), omega, p.omega_d, p.Omega_d)
            + omega / np.sqrt(wk * wk + b * b) - c2 / (wk * wk + b * b))


def _tail_transform(r, omega, b, c2):
    # closed-form 2D transforms of the subtracted tail pieces
    return (-omega * np.exp(-b * r) / r + c2 * k0(b * r)) / (2.0 * np.pi)


def _residual_decayed(p, omega, b, c2, k_max) -> tuple[bool, float]:
    edge = float(np.abs(_kernel_residual(p, np.array([k_max]), omega, b, c2))[0])
    peak = float(np.abs(_kernel_residual(p, np.array([0.0]), omega, b, c2))[0])
    peak = max(peak, edge)
    return edge <= 1e-6 * peak, edge


def effective_potential(p: SystemParams, omega: float, r_grid,
                        n_grid: int = 2048, k_max: float | None = None,
                        normalization: float | None = None,
                        max_n_grid: int = 8192) -> PotentialProfile:
    """Finite-range potential U_omega(r) by 2D FFT of the Fourier kernel.

    omega must lie strictly inside the polariton gap.  n_grid is the FFT
    side (power of two >= 1024); the square k-grid spans [-k_max, k_max).
    With k_max=None the window is derived from r_grid (largest k_max that
    still reaches max(r)); if the residual kernel has not decayed below
    1e-6 of its peak there, n_grid is doubled up to max_n_grid.  An
    explicit k_max is used as-is and failures raise ResolutionError.
    The radial profile along +x is interpolated onto r_grid through a
    monotone cubic of r*U(r).
    """
    _require_in_gap(p, float(omega))
    omega = float(omega)
    r = np.asarray(r_grid, dtype=float)
    if r.ndim != 1 or r.size == 0 or np.any(r <= 0):
        raise DomainError("r_grid must be a 1D array of positive radii")
    if n_grid < 1024 or (n_grid & (n_grid - 1)) != 0:
        raise DomainError("n_grid must be a power of two >= 1024")

    b, c2 = _tail_coefficients(p, omega)
    if k_max is None:
        while True:
            k_pick = np.pi * (n_grid // 2 - 1) / r.max()
            ok, _ = _residual_decayed(p, omega, b, c2, k_pick)
            if ok and np.pi / k_pick <= r.min():
                k_max = k_pick
                break
            if n_grid >= max_n_grid:
                raise ResolutionError(
                    f"no FFT window up to n_grid={max_n_grid} resolves "
                    f"r in [{r.min():.6g}, {r.max():.6g}] with a decayed "
                    "residual kernel; shrink the radius range")
            n_grid *= 2
    dk = 2.0 * k_max / n_grid
    dr = 2.0 * np.pi / (n_grid * dk)          # = pi / k_max
    r_nat = np.arange(1, n_grid // 2) * dr
    if r.min() < r_nat[0] or r.max() > r_nat[-1]:
        raise ResolutionError(
            f"r_grid must lie within [{r_nat[0]:.6g}, {r_nat[-1]:.6g}] for "
            f"n_grid={n_grid}, k_max={k_max}; adjust the grid")

    kx = np.fft.fftfreq(n_grid, d=1.0 / (n_grid * dk))
    kk = np.hypot(kx[:, None], kx[None, :])
    k_res = _kernel_residual(p, kk, omega, b, c2)
    edge = float(np.abs(_kernel_residual(p, np.array([k_max]), omega, b, c2))[0])
    peak = float(np.abs(k_res).max())
    if edge > 1e-6 * peak:
        raise ResolutionError(
            f"residual kernel at k_max={k_max} is {edge:.3e}, above 1e-6 of "
            f"its peak {peak:.3e}; increase k_max")

    u2d = np.fft.ifft2(k_res).real * (n_grid * n_grid * dk * dk / (4.0 * np.pi**2))
    profile = u2d[0, 1:n_grid // 2] + _tail_transform(r_nat, omega, b, c2)
    interp = PchipInterpolator(r_nat, r_nat * profile)
    u = interp(r) / r
    return PotentialProfile(r=r, u=u, omega=omega, normalization=normalization)


# approximate J0 zeros (McMahon); used only as quadrature panel edges
def _j0_zeros_upto(x_max: float) -> np.ndarray:
    n = max(1, int(np.ceil(x_max / np.pi + 0.25)) + 1)
    m = np.arange(1, n + 1)
    beta = (m - 0.25) * np.pi
    return beta + 1.0 / (8.0 * beta)


def potential_hankel_oracle(p: SystemParams, omega: float, r_grid,
                            k_big: float = 4000.0, panel_order: int = 16):
    """Independent Hankel-quadrature evaluation of U_omega(r).

    Integrates k*K_res(k)*J0(kr) with fixed-order Gauss-Legendre panels
    between consecutive J0 zeros up to k_big and adds the analytic tail
    transforms.  Kept deliberately separate from the FFT route.
    """
    _require_in_gap(p, float(omega))
    omega = float(omega)
    r = np.asarray(r_grid, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r_grid must be positive")
    b, c2 = _tail_coefficients(p, omega)
    gl_x, gl_w = roots_legendre(panel_order)
    out = np.empty_like(r)
    for i, ri in enumerate(r):
        edges = np.concatenate([[0.0], _j0_zeros_upto(k_big * ri) / ri])
        edges = edges[edges <= k_big]
        edges = np.concatenate([edges, [k_big]])
        mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
        half = 0.5 * (edges[1:] - edges[:-1])[:, None]
        nodes = mid + half * gl_x[None, :]
        vals = nodes * _kernel_residual(p, nodes, omega, b, c2) * j0(nodes * ri)
        out[i] = np.sum(vals * gl_w[None, :] * half) / (2.0 * np.pi)
    return out + _tail_transform(r, omega, b, c2)


def emitter_shift_coefficients(p: SystemParams):
    """Effective emitter-shift coefficients (electrostatic, kernel(k)).

    electrostatic = -(Omega_e^2/(4 omega_e omega_d)) * Omega_d^2/(omega_d - omega_e)
    is the contact piece; the returned callable evaluates the retarded
    piece (Omega_e^2/(4 omega_e)) * K_{omega_e}(k).  omega_e = omega_d is
    a pole of the contact term.
    """
    if abs(p.omega_e - p.omega_d) < POLE_GUARD:
        raise PoleError("omega_e coincides with omega_d; the electrostatic "
                        "coefficient has a pole there")
    electro = -(p.Omega_e**2 / (4.0 * p.omega_e * p.omega_d)) * \
        p.Omega_d**2 / (p.omega_d - p.omega_e)

    def kernel_coefficient(k):
        return (p.Omega_e**2 / (4.0 * p.omega_e)) * kernel_K(p, k, p.omega_e)

    return electro, kernel_coefficient


def _rabi_ratio(p: SystemParams, branch: str, omega_k: float) -> float:
    """Omega_branch / Omega_e at the given cavity frequency."""
    from .hopfield import mixing_sin_cos
    if branch not in ("lp", "up"):
        raise DomainError(f"branch must be 'lp' or 'up' (got {branch!r})")
    omega_k = abs(float(omega_k))
    if omega_k == 0.0:
        return 0.0
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    sin_t, cos_t = mixing_sin_cos(p, omega_k)
    if branch == "lp":
        return float(np.sqrt(omega_k**2 / (p.omega_e * omega_lp)) * cos_t)
    return float(np.sqrt(omega_k**2 / (p.omega_e * omega_up)) * sin_t)


def chi2_effective(p: SystemParams, triplet) -> float:
    """Dimensionless three-wave-mixing scale Prod_i Omega_{l_i, k_i} / Omega_e^3.

    triplet is three (branch, k) pairs; the geometry prefactor of the
    bare chi2 is reported as 1 in reduced units.
    """
    legs = list(triplet)
    if len(legs) != 3:
        raise DomainError("triplet must contain exactly three (branch, k) legs")
    out = 1.0
    for branch, k in legs:
        out *= _rabi_ratio(p, branch, abs(float(k)))
    return out


@dataclass(frozen=True)
class Triplet:
    """One phase-matched three-wave-mixing combination."""

    l1: str
    k1: float
    l2: str
    k2: float
    l3: str
    k3: float
    mismatch: float
    chi2_scale: float

    def as_record(self) -> dict:
        return {"l1": self.l1, "k1": self.k1, "l2": self.l2, "k2": self.k2,
                "l3": self.l3, "k3": self.k3, "mismatch": self.mismatch,
                "chi2_scale": self.chi2_scale}


def find_phase_matched_triplets(p: SystemParams, k_grid, tol_omega: float):
    """All collinear triplets with k1 + k2 = k3 on-grid and |w1 + w2 - w3| <= tol.

    The scan is a brute-force loop over unordered (leg1, leg2) pairs;
    k3 must coincide with a grid value to within 1e-9 relative.  Results
    are sorted by (k3, l3, k1, l1, l2) for determinism.
    """
    k = np.asarray(k_grid, dtype=float)
    if k.size == 0:
        raise DomainError("k_grid must not be empty")
    if tol_omega < 0:
        raise DomainError("tol_omega must be >= 0")
    ks = np.sort(k)
    branch_omega = {}
    for br, idx in (("lp", 0), ("up", 1)):
        branch_omega[br] = np.asarray(polariton_frequencies(p, np.abs(ks)))[idx]

    # vectorized momentum matching: for every unordered pair find the
    # nearest grid value to k_i + k_j and keep on-grid hits only
    n = ks.size
    iu, ju = np.triu_indices(n)
    sums = ks[iu] + ks[ju]
    pos = np.clip(np.searchsorted(ks, sums), 1, n - 1)
    left = np.abs(ks[pos - 1] - sums)
    right = np.abs(ks[pos] - sums)
    i3 = np.where(left < right, pos - 1, pos)
    err = np.minimum(left, right)
    hits = err <= 1e-9 * np.maximum(1.0, np.abs(sums))

    found = []
    branches = ("lp", "up")
    for i, j, m in zip(iu[hits], ju[hits], i3[hits]):
        for bi, l1 in enumerate(branches):
            for bj, l2 in enumerate(branches):
                if i == j and bj < bi:
                    continue
                w12 = branch_omega[l1][i] + branch_omega[l2][j]
                for l3 in branches:
                    mism = w12 - branch_omega[l3][m]
                    if abs(mism) <= tol_omega:
                        chi2 = chi2_effective(
                            p, [(l1, ks[i]), (l2, ks[j]), (l3, ks[m])])
                        found.append(Triplet(l1, float(ks[i]), l2, float(ks[j]),
                                             l3, float(ks[m]),
                                             float(mism), float(chi2)))
    found.sort(key=lambda t: (t.k3, t.l3, t.k1, t.l1, t.l2))
    return found
