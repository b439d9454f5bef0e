"""Hot numeric kernels: transmission maps and Fourier-kernel grids.

Each kernel has a numba @njit implementation and a vectorized numpy
fallback with identical arithmetic; ``uscpol._backend`` decides which
one runs (env var USCPOL_NUMBA=0 forces numpy).  The njit loops are
single-threaded and fixed-order, so results do not depend on scheduling.
"""

from __future__ import annotations

import numpy as np

from ._backend import numba_available, numba_enabled

if numba_available():
    from numba import njit
else:  # pragma: no cover - exercised only without numba installed
    def njit(*args, **kwargs):
        def wrap(f):
            return f
        return wrap if not (args and callable(args[0])) else args[0]


# --------------------------------------------------------------------------
# transmission map: T(k, w) = gamma * omega_k * [M^-1]_00 of the 3x3
# dynamical matrix (photon, dresser, emitter)
# --------------------------------------------------------------------------

def _trans_map_numpy(omega_k, omega, wd, we, Od, Oe, gam, kd, ke):
    # lossless grids can contain exact singular points; mirror the numba
    # backend by raising instead of emitting inf/nan silently
    wk = omega_k[:, None]
    w = omega[None, :]
    m00 = wk**2 - (w + 0.5j * gam) ** 2
    m11 = wd**2 - (w + 0.5j * kd) ** 2
    m22 = we**2 - (w + 0.5j * ke) ** 2
    m01 = 1j * w * Od
    m02 = 1j * w * Oe
    m10 = -1j * w * Od
    m20 = -1j * w * Oe
    m12 = np.broadcast_to(-Od * Oe + 0j, m00.shape)
    adj00 = m11 * m22 - m12 * m12
    det = m00 * adj00 - m01 * (m10 * m22 - m12 * m20) + m02 * (m10 * m12 - m11 * m20)
    if np.any(det == 0):
        raise ZeroDivisionError("complex division by zero")
    return gam * wk * adj00 / det


@njit(cache=True, nogil=True)
def _trans_map_numba(omega_k, omega, wd, we, Od, Oe, gam, kd, ke, out):  # pragma: no cover - compiled
    for i in range(omega_k.size):
        wk = omega_k[i]
        wk2 = wk * wk
        for j in range(omega.size):
            w = omega[j]
            m00 = wk2 - (w + 0.5j * gam) ** 2
            m11 = wd * wd - (w + 0.5j * kd) ** 2
            m22 = we * we - (w + 0.5j * ke) ** 2
            m01 = 1j * w * Od
            m02 = 1j * w * Oe
            m10 = -1j * w * Od
            m20 = -1j * w * Oe
            m12 = -Od * Oe + 0j
            adj00 = m11 * m22 - m12 * m12
            det = m00 * adj00 - m01 * (m10 * m22 - m12 * m20) + m02 * (m10 * m12 - m11 * m20)
            out[i, j] = gam * wk * adj00 / det


def transmission_grid(omega_k, omega, wd, we, Od, Oe, gam, kd, ke):
    """Complex transmission amplitude on the (omega_k, omega) grid."""
    omega_k = np.ascontiguousarray(omega_k, dtype=np.float64)
    omega = np.ascontiguousarray(omega, dtype=np.float64)
    if numba_enabled():
        out = np.empty((omega_k.size, omega.size), dtype=np.complex128)
        _trans_map_numba(omega_k, omega, wd, we, Od, Oe, gam, kd, ke, out)
        return out
    return _trans_map_numpy(omega_k, omega, wd, we, Od, Oe, gam, kd, ke)


# --------------------------------------------------------------------------
# lossless Fourier kernel K_w(k) on flat wavevector arrays
# (stable form: wk^2/wlp^2 -> wup^2/wd^2 and wk^2/wup^2 -> wlp^2/wd^2
#  through the product identity, finite at k = 0)
# --------------------------------------------------------------------------

def _kernel_vals_numpy(wk, w, wd, Od):
    OX = wd * wd + Od * Od
    OA = wk * wk
    G = Od * wk
    M = OX - OA
    D = np.sqrt(M * M + 4.0 * G * G)
    Dsafe = np.where(D > 0, D, 1.0)
    wup2 = 0.5 * (OX + OA + D)
    wup = np.sqrt(wup2)
    wlp = wd * wk / wup
    den_minus = Dsafe * (Dsafe - M)
    den_plus = Dsafe * (Dsafe + M)
    raw_cos2 = np.where(M >= 0, 0.5 * (1.0 + M / Dsafe),
                        2.0 * G * G / np.where(den_minus > 0, den_minus, 1.0))
    raw_sin2 = np.where(M <= 0, 0.5 * (1.0 - M / Dsafe),
                        2.0 * G * G / np.where(den_plus > 0, den_plus, 1.0))
    cos2 = np.where(D > 0,
                    np.where(raw_cos2 <= 0.5, raw_cos2, 1.0 - raw_sin2),
                    0.5)
    sin2 = 1.0 - cos2
    t1 = (wup2 / (wd * wd)) * cos2 * w / (w - wlp)
    t2 = -(Od * Od / (wd * wd)) * w / (w - wd)
    t3 = (wlp * wlp / (wd * wd)) * sin2 * w / (w - wup)
    return t1 + t2 + t3


@njit(cache=True, nogil=True)
def _kernel_vals_numba(wk, w, wd, Od, out):  # pragma: no cover - compiled
    for i in range(wk.size):
        k = wk[i]
        OX = wd * wd + Od * Od
        OA = k * k
        G = Od * k
        M = OX - OA
        D = np.sqrt(M * M + 4.0 * G * G)
        wup2 = 0.5 * (OX + OA + D)
        wup = np.sqrt(wup2)
        wlp = wd * k / wup
        if D > 0:
            if M >= 0:
                raw_cos2 = 0.5 * (1.0 + M / D)
            else:
                raw_cos2 = 2.0 * G * G / (D * (D - M))
            if raw_cos2 <= 0.5:
                cos2 = raw_cos2
            elif M <= 0:
                cos2 = 1.0 - 0.5 * (1.0 - M / D)
            else:
                cos2 = 1.0 - 2.0 * G * G / (D * (D + M))
        else:
            cos2 = 0.5
        sin2 = 1.0 - cos2
        t1 = (wup2 / (wd * wd)) * cos2 * w / (w - wlp)
        t2 = -(Od * Od / (wd * wd)) * w / (w - wd)
        t3 = (wlp * wlp / (wd * wd)) * sin2 * w / (w - wup)
        out[i] = t1 + t2 + t3


def kernel_values(wk, omega, wd, Od):
    """K_omega(|k|) evaluated elementwise; output matches the input shape."""
    arr = np.asarray(wk, dtype=np.float64)
    flat = np.ascontiguousarray(arr.reshape(-1))
    if numba_enabled():
        out = np.empty_like(flat)
        _kernel_vals_numba(flat, float(omega), wd, Od, out)
    else:
        out = _kernel_vals_numpy(flat, float(omega), wd, Od)
    return out.reshape(arr.shape)
