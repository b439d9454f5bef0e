"""Backend parity and selection for the compiled kernels."""

import numpy as np
import pytest

from uscpol import _backend, _kernels

ARGS = dict(wd=1.0, we=0.7, Od=1.0, Oe=0.2, gam=0.01, kd=0.05, ke=0.05)

needs_numba = pytest.mark.skipif(not _backend.numba_available(),
                                 reason="numba not installed")


@needs_numba
def test_transmission_backends_agree():
    wk = np.linspace(0.02, 3.5, 60)
    w = np.linspace(0.05, 3.2, 80)
    a = (wk, w, ARGS["wd"], ARGS["we"], ARGS["Od"], ARGS["Oe"],
         ARGS["gam"], ARGS["kd"], ARGS["ke"])
    ref = _kernels._trans_map_numpy(*a)
    out = np.empty((wk.size, w.size), dtype=np.complex128)
    _kernels._trans_map_numba(*a, out)
    np.testing.assert_allclose(out, ref, rtol=1e-12, atol=0)


@needs_numba
def test_kernel_backends_agree():
    kk = np.concatenate([[0.0], np.geomspace(1e-3, 1e3, 300)])
    omega = 1.2071067811865475
    ref = _kernels._kernel_vals_numpy(kk, omega, 1.0, 1.0)
    out = np.empty_like(kk)
    _kernels._kernel_vals_numba(kk, omega, 1.0, 1.0, out)
    np.testing.assert_allclose(out, ref, rtol=1e-12, atol=1e-300)


def test_env_flag_forces_numpy(monkeypatch):
    monkeypatch.setenv("USCPOL_NUMBA", "0")
    assert not _backend.numba_enabled()
    assert _backend.backend_name() == "numpy"
    monkeypatch.setenv("USCPOL_NUMBA", "1")
    assert _backend.numba_enabled() == _backend.numba_available()


def test_dispatch_respects_flag(monkeypatch):
    wk = np.linspace(0.1, 2.0, 11)
    w = np.linspace(0.2, 2.5, 13)
    a = (wk, w, ARGS["wd"], ARGS["we"], ARGS["Od"], ARGS["Oe"],
         ARGS["gam"], ARGS["kd"], ARGS["ke"])
    monkeypatch.setenv("USCPOL_NUMBA", "0")
    forced = _kernels.transmission_grid(*a)
    np.testing.assert_array_equal(forced, _kernels._trans_map_numpy(*a))
