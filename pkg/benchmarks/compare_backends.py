#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallbacks.

Runs the transmission-map and Fourier-kernel grids with both backends,
checks they agree, and prints a small table.  Force the fallback at the
CLI level with USCPOL_NUMBA=0; here we call both implementations
directly so a single run compares them.
"""

import time

import numpy as np

from uscpol import _kernels
from uscpol._backend import numba_available

PARAMS = dict(wd=1.0, we=0.7, Od=1.0, Oe=0.2, gam=0.01, kd=0.05, ke=0.05)


def time_call(fn, *args, repeat=3):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_transmission(nk=400, nw=2000):
    wk = np.linspace(0.02, 3.5, nk)
    w = np.linspace(0.05, 3.2, nw)
    a = (wk, w, PARAMS["wd"], PARAMS["we"], PARAMS["Od"], PARAMS["Oe"],
         PARAMS["gam"], PARAMS["kd"], PARAMS["ke"])
    t_np, out_np = time_call(lambda: _kernels._trans_map_numpy(*a))
    row = [f"transmission {nk}x{nw}", f"{t_np * 1e3:9.1f} ms"]
    if numba_available():
        out_nb = np.empty((nk, nw), dtype=np.complex128)
        _kernels._trans_map_numba(*a, out_nb)  # compile
        t_nb, _ = time_call(lambda: _kernels._trans_map_numba(*a, out_nb) or out_nb)
        assert np.allclose(out_nb, out_np, rtol=1e-12, atol=1e-300)
        row += [f"{t_nb * 1e3:9.1f} ms", f"{t_np / t_nb:6.2f}x"]
    else:
        row += ["      n/a", "   n/a"]
    return row


def bench_kernel(n=2048, k_max=64.0):
    kx = np.fft.fftfreq(n, d=1.0 / (n * 2 * k_max / n))
    kk = np.hypot(kx[:, None], kx[None, :]).ravel()
    omega = 1.2071067811865475
    t_np, out_np = time_call(
        lambda: _kernels._kernel_vals_numpy(kk, omega, PARAMS["wd"], PARAMS["Od"]))
    row = [f"fourier kernel {n}x{n}", f"{t_np * 1e3:9.1f} ms"]
    if numba_available():
        out_nb = np.empty_like(kk)
        _kernels._kernel_vals_numba(kk, omega, PARAMS["wd"], PARAMS["Od"], out_nb)
        t_nb, _ = time_call(
            lambda: _kernels._kernel_vals_numba(kk, omega, PARAMS["wd"], PARAMS["Od"], out_nb) or out_nb)
        assert np.allclose(out_nb, out_np, rtol=1e-12, atol=1e-300)
        row += [f"{t_nb * 1e3:9.1f} ms", f"{t_np / t_nb:6.2f}x"]
    else:
        row += ["      n/a", "   n/a"]
    return row


def main():
    rows = [bench_transmission(), bench_kernel()]
    header = ["kernel", "numpy", "numba", "speedup"]
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(4)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


if __name__ == "__main__":
    main()
