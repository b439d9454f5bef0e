"""Classical-electrodynamics route: dynamical matrix, transmission spectra,
permittivity and the radiative-damping Purcell rate.

The 3x3 dynamical matrix in (photon, dresser, emitter) order carries the
phenomenological dampings as (w + i*rate/2)^2 replacements on the
diagonal; the cavity transmission is gamma * omega_k * [M^-1]_00.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .emission import polariton_linewidths
from .errors import DomainError, NumericsError, PoleError, RootFindingError
from .hopfield import polariton_frequencies
from .params import LINEAR_TM0, SystemParams

__all__ = [
    "SpectralMap",
    "PermittivityResult",
    "dynamical_matrix",
    "transmission",
    "transmission_map",
    "permittivity_hopfield",
    "permittivity_matrix",
    "permittivity_both",
    "classical_dispersion_roots",
    "classical_purcell",
]

_POLE_EPS = 1e-12


@dataclass(frozen=True)
class SpectralMap:
    """Complex transmission amplitude on a rectangular (k, omega) grid."""

    k_grid: np.ndarray
    omega_grid: np.ndarray
    values: np.ndarray  # complex, shape (nk, nomega), row-major over (k, omega)

    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2


@dataclass(frozen=True)
class PermittivityResult:
    omega: float
    eps_hopfield: complex
    eps_matrix: complex


def permittivity_both(p: "SystemParams", omega) -> "PermittivityResult":
    """Evaluate the two permittivity forms at one frequency."""
    return PermittivityResult(omega=float(omega),
                              eps_hopfield=permittivity_hopfield(p, omega),
                              eps_matrix=permittivity_matrix(p, omega))


def dynamical_matrix(p: SystemParams, k, omega) -> np.ndarray:
    """3x3 complex dynamical matrix at one (k, omega) point."""
    wk = LINEAR_TM0.omega(k)
    w = omega
    return np.array([
        [wk**2 - (w + 0.5j * p.gamma_c) ** 2, 1j * w * p.Omega_d, 1j * w * p.Omega_e],
        [-1j * w * p.Omega_d, p.omega_d**2 - (w + 0.5j * p.kappa_d) ** 2, -p.Omega_d * p.Omega_e],
        [-1j * w * p.Omega_e, -p.Omega_d * p.Omega_e, p.omega_e**2 - (w + 0.5j * p.kappa_e) ** 2],
    ], dtype=complex)


def transmission(p: SystemParams, k, omega) -> complex:
    """Cavity transmission amplitude T = gamma * omega_k * [M^-1]_00."""
    wk = float(LINEAR_TM0.omega(k))
    try:
        out = _kernels.transmission_grid(
            np.asarray([wk]), np.asarray([float(omega)], dtype=float),
            p.omega_d, p.omega_e, p.Omega_d, p.Omega_e,
            p.gamma_c, p.kappa_d, p.kappa_e)[0, 0]
    except ZeroDivisionError:
        raise NumericsError(
            f"dynamical matrix is singular at k={k:.12g}, omega={omega:.12g}")
    if not np.isfinite(out.real) or not np.isfinite(out.imag):
        raise NumericsError(
            f"dynamical matrix is singular at k={k:.12g}, omega={omega:.12g}")
    return complex(out)


def transmission_map(p: SystemParams, k_grid, omega_grid, threads: int = 1,
                     dispersion=LINEAR_TM0) -> SpectralMap:
    """Transmission amplitudes over the grid; parallel over k-chunks.

    Results are assembled by index, so they do not depend on the number
    of threads.
    """
    k = np.asarray(k_grid, dtype=float)
    w = np.asarray(omega_grid, dtype=float)
    wk = np.asarray(dispersion.omega(k), dtype=float)
    args = (p.omega_d, p.omega_e, p.Omega_d, p.Omega_e,
            p.gamma_c, p.kappa_d, p.kappa_e)
    try:
        if threads <= 1 or k.size < 2 * threads:
            values = _kernels.transmission_grid(wk, w, *args)
        else:
            chunks = np.array_split(np.arange(k.size), threads)
            values = np.empty((k.size, w.size), dtype=complex)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [(idx, pool.submit(_kernels.transmission_grid, wk[idx], w, *args))
                           for idx in chunks if idx.size]
                for idx, fut in futures:
                    values[idx] = fut.result()
    except ZeroDivisionError:
        raise NumericsError(
            "dynamical matrix is singular on a lossless grid point; add "
            "linewidths or move the grid off the bare resonances")
    return SpectralMap(k_grid=k, omega_grid=w, values=values)


def _lossy_denominators(p: SystemParams, omega):
    w = omega
    Dd = p.omega_d**2 - w * w - 1j * p.kappa_d * w
    De = p.omega_e**2 - w * w - 1j * p.kappa_e * w
    return Dd, De


def permittivity_hopfield(p: SystemParams, omega) -> complex:
    """Clausius-Mossotti-style permittivity with shifted resonances.

    eps = 1 / (1 - Od^2/(wbar_d^2 - w^2 - i kd w) - Oe^2/(wbar_e^2 - w^2 - i ke w))
    with wbar_a^2 = omega_a^2 + Omega_a^2 (the emitter shift defined by
    symmetry with the dresser).
    """
    w = float(omega)
    outer = 1.0 + 0j
    for Om, w0, kappa, name in ((p.Omega_d, p.omega_d, p.kappa_d, "dresser"),
                                (p.Omega_e, p.omega_e, p.kappa_e, "emitter")):
        if Om == 0.0:
            continue  # absent slab contributes nothing
        den = w0 * w0 + Om * Om - w * w - 1j * kappa * w
        if abs(den) < _POLE_EPS:
            raise PoleError(f"lossless {name} denominator vanishes at omega = {w:.12g}")
        outer -= Om * Om / den
    if abs(outer) < _POLE_EPS:
        raise PoleError(f"permittivity pole at omega = {w:.12g}")
    return complex(1.0 / outer)


def permittivity_matrix(p: SystemParams, omega) -> complex:
    """Two-slab closed form from the inverse matter susceptibility matrix.

    eps = 1 + [Od^2 De + Oe^2 Dd + 2 Od^2 Oe^2] / (Dd De - Od^2 Oe^2)
    with D_a = omega_a^2 - w^2 - i kappa_a w.
    """
    w = float(omega)
    Dd, De = _lossy_denominators(p, w)
    # decoupled slabs reduce to independent susceptibilities (a vanishing
    # diagonal of the absent slab would otherwise fake a pole)
    if p.Omega_d == 0.0 or p.Omega_e == 0.0:
        out = 1.0 + 0j
        for Om, den, name in ((p.Omega_d, Dd, "dresser"), (p.Omega_e, De, "emitter")):
            if Om == 0.0:
                continue
            if abs(den) < _POLE_EPS:
                raise PoleError(f"{name} pole at omega = {w:.12g}")
            out += Om * Om / den
        return complex(out)
    det = Dd * De - p.Omega_d**2 * p.Omega_e**2
    if abs(det) < _POLE_EPS:
        raise PoleError(f"matter determinant vanishes at omega = {w:.12g}")
    num = p.Omega_d**2 * De + p.Omega_e**2 * Dd + 2.0 * p.Omega_d**2 * p.Omega_e**2
    return complex(1.0 + num / det)


def _eps_matrix_lossless(p: SystemParams, w: float) -> float:
    Dd = p.omega_d**2 - w * w
    De = p.omega_e**2 - w * w
    if p.Omega_d == 0.0 or p.Omega_e == 0.0:
        out = 1.0
        if p.Omega_d != 0.0:
            out += p.Omega_d**2 / Dd
        if p.Omega_e != 0.0:
            out += p.Omega_e**2 / De
        return out
    det = Dd * De - p.Omega_d**2 * p.Omega_e**2
    num = p.Omega_d**2 * De + p.Omega_e**2 * Dd + 2.0 * p.Omega_d**2 * p.Omega_e**2
    return 1.0 + num / det


def _matter_pole_frequencies(p: SystemParams):
    """Positive zeros of the lossless 2x2 matter determinant (quadratic in w^2)."""
    wd2, we2 = p.omega_d**2, p.omega_e**2
    c = wd2 * we2 - p.Omega_d**2 * p.Omega_e**2
    s = wd2 + we2
    disc = np.sqrt(max(s * s - 4.0 * c, 0.0))
    roots = [(s - disc) / 2.0, (s + disc) / 2.0]
    return [np.sqrt(x) for x in roots if x > 0]


def _eps_zero_frequencies(p: SystemParams):
    """Positive zeros of the lossless eps (det + num = 0, quadratic in w^2)."""
    wd2, we2 = p.omega_d**2, p.omega_e**2
    Od2, Oe2 = p.Omega_d**2, p.Omega_e**2
    # (wd2-x)(we2-x) - Od2*Oe2 + Od2*(we2-x) + Oe2*(wd2-x) + 2*Od2*Oe2 = 0
    a = 1.0
    b = -(wd2 + we2 + Od2 + Oe2)
    c = wd2 * we2 + Od2 * Oe2 + Od2 * we2 + Oe2 * wd2
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return []
    sq = np.sqrt(disc)
    return [np.sqrt(x) for x in ((-b - sq) / 2.0, (-b + sq) / 2.0) if x > 0]


def classical_dispersion_roots(p: SystemParams, k) -> np.ndarray:
    """Positive real roots of w^2 eps(w) = c^2 k^2 (lossless).

    Requires all linewidths to be zero; brackets between consecutive
    poles/zeros of eps and bisects each sign change (200 iterations).
    Returns at most three roots, ascending.
    """
    if p.gamma_c != 0 or p.kappa_d != 0 or p.kappa_e != 0:
        raise DomainError("classical_dispersion_roots requires a lossless "
                          "parameter set (use params.lossless())")
    ck = float(LINEAR_TM0.omega(k))
    target = ck * ck

    def f(w):
        return w * w * _eps_matrix_lossless(p, w) - target

    breakpoints = sorted(set(
        [0.0] + _matter_pole_frequencies(p) + _eps_zero_frequencies(p)))
    top = 2.0 * max([ck] + breakpoints) + 1.0
    breakpoints.append(top)
    roots = []
    brackets_tried = []
    for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
        a = lo + max(abs(lo), 1.0) * 1e-11
        b = hi - max(abs(hi), 1.0) * 1e-11
        if a >= b:
            continue
        fa, fb = f(a), f(b)
        brackets_tried.append((a, b))
        if not np.isfinite(fa) or not np.isfinite(fb) or fa * fb > 0:
            continue
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = f(mid)
            if fa * fm <= 0:
                b = mid
            else:
                a, fa = mid, fm
        roots.append(0.5 * (a + b))
    if not roots:
        raise RootFindingError("no dispersion roots found",
                               brackets=brackets_tried)
    roots = np.array(sorted(roots))
    if roots.size > 3:
        raise RootFindingError(f"found {roots.size} roots, expected <= 3",
                               brackets=brackets_tried)
    return roots


def classical_purcell(p: SystemParams, branch: str, k, model="cavity",
                      resonance_tol: float = 1e-6) -> float:
    """Radiative-damping rate of an emitter resonant with one polariton branch.

    Expands the classical susceptibilities chi_{e|E} + chi_{e|d} at the
    branch pole (lifted by the dressed linewidth) and reads off the decay
    of the emitter polarization.  Requires |omega_e - omega_branch(k)| to
    be within resonance_tol.
    """
    if branch not in ("lp", "up"):
        raise DomainError(f"branch must be 'lp' or 'up' (got {branch!r})")
    wk = float(LINEAR_TM0.omega(k))
    omega_lp, omega_up = polariton_frequencies(p, wk)
    w_b = omega_lp if branch == "lp" else omega_up
    w_o = omega_up if branch == "lp" else omega_lp
    if abs(p.omega_e - w_b) > resonance_tol:
        raise DomainError(
            f"emitter (omega_e = {p.omega_e:.12g}) is not resonant with the "
            f"{branch} branch at k = {k:.12g} (omega_branch = {w_b:.12g})")
    g_lp, g_up = polariton_linewidths(p, wk, model)
    g_b = g_lp if branch == "lp" else g_up
    if g_b <= 0:
        raise DomainError("dressed linewidth vanishes; Purcell regime undefined")
    if w_o == w_b:
        raise DomainError(
            "degenerate polariton branches (Omega_d = 0 at omega_k = omega_d); "
            "the single-pole bare-cavity limit applies instead")
    # residue of [w^2(wup^2+wlp^2-wk^2-w^2) + Od^2 wk^2] / [(wup^2-w^2)(wlp^2-w^2)]
    # at w = w_b with the resonant factor lifted by -i g_b w
    num = w_b**2 * (omega_up**2 + omega_lp**2 - wk**2 - w_b**2) + p.Omega_d**2 * wk**2
    denom = (-1j * g_b * w_b) * (w_o**2 - w_b**2)
    chi_sum = num / denom
    return float(p.Omega_e**2 * chi_sum.imag / (2.0 * p.omega_e))
