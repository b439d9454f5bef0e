"""Deterministic data-file emission: CSV, binary spectral maps, run manifests.

All floats are written with 12 significant digits (9 for spectral-map
entries), locale-independent, "\n" line endings; every file is written
atomically (temp file in the target directory, then rename).
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
from dataclasses import fields

import numpy as np

from .classical import SpectralMap
from .errors import DomainError

__all__ = [
    "atomic_write_bytes",
    "write_csv",
    "spectral_map_csv",
    "save_spectral_map",
    "load_spectral_map",
    "write_manifest",
    "sha256_file",
]

MAGIC = b"USCPOLv1"


def _fmt12(x) -> str:
    return f"{x:.12g}"


def atomic_write_bytes(path, data: bytes) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".uscpol-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def write_csv(path, columns: dict) -> None:
    """Write named columns (equal-length arrays) as CSV, 12 sig digits."""
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[n])) for n in names]
    n = arrays[0].size
    if any(a.size != n for a in arrays):
        raise DomainError("CSV columns must have equal length")
    lines = [",".join(names)]
    for i in range(n):
        cells = []
        for a in arrays:
            v = a[i]
            cells.append(str(v) if a.dtype.kind in "US" else _fmt12(v))
        lines.append(",".join(cells))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _fmt_complex9(z: complex) -> str:
    return f"{z.real:.9g}{z.imag:+.9g}i"


def spectral_map_csv(smap: SpectralMap) -> str:
    """Header row of omega values, leading column of k values, re+imi cells."""
    header = "k\\omega," + ",".join(f"{w:.9g}" for w in smap.omega_grid)
    lines = [header]
    for i, k in enumerate(smap.k_grid):
        row = [f"{k:.9g}"] + [_fmt_complex9(z) for z in smap.values[i]]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def save_spectral_map(path, smap: SpectralMap, fmt: str = "csv") -> None:
    if fmt == "csv":
        atomic_write_text(path, spectral_map_csv(smap))
    elif fmt == "bin":
        nk, nw = smap.k_grid.size, smap.omega_grid.size
        payload = bytearray()
        payload += MAGIC
        payload += struct.pack("<II", nk, nw)
        payload += np.ascontiguousarray(smap.k_grid, dtype="<f8").tobytes()
        payload += np.ascontiguousarray(smap.omega_grid, dtype="<f8").tobytes()
        inter = np.empty((nk, nw, 2), dtype="<f8")
        inter[:, :, 0] = smap.values.real
        inter[:, :, 1] = smap.values.imag
        payload += inter.tobytes()
        atomic_write_bytes(path, bytes(payload))
    else:
        raise DomainError(f"unknown spectral map format {fmt!r}")


def load_spectral_map(path) -> SpectralMap:
    """Read the 16-byte-header binary layout back into a SpectralMap."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:8] != MAGIC:
        raise DomainError(f"{path}: bad magic, not a uscpol spectral map")
    nk, nw = struct.unpack("<II", blob[8:16])
    need = 16 + 8 * (nk + nw + 2 * nk * nw)
    if len(blob) != need:
        raise DomainError(f"{path}: truncated map ({len(blob)} bytes, expected {need})")
    off = 16
    k = np.frombuffer(blob, dtype="<f8", count=nk, offset=off).copy()
    off += 8 * nk
    w = np.frombuffer(blob, dtype="<f8", count=nw, offset=off).copy()
    off += 8 * nw
    inter = np.frombuffer(blob, dtype="<f8", count=2 * nk * nw, offset=off)
    inter = inter.reshape(nk, nw, 2)
    values = inter[:, :, 0] + 1j * inter[:, :, 1]
    return SpectralMap(k_grid=k, omega_grid=w, values=values)


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(path, command: str, params, extras: dict, outputs,
                   version: str, backend: str, threads: int,
                   diagnostics=None) -> None:
    """JSON run manifest: command, resolved parameters, grids, output hashes."""
    grids = {}
    options = {}
    for key, value in (extras or {}).items():
        if isinstance(value, np.ndarray):
            grids[key] = {"start": float(value[0]), "stop": float(value[-1]),
                          "count": int(value.size)}
        else:
            options[key] = value
    doc = {
        "command": command,
        "tool": "uscpol",
        "version": version,
        "backend": backend,
        "threads": threads,
        "params": {f.name: getattr(params, f.name) for f in fields(params)},
        "grids": grids,
        "options": options,
        "outputs": {os.path.basename(str(f)): sha256_file(f) for f in outputs},
    }
    if diagnostics:
        doc["diagnostics"] = diagnostics
    atomic_write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")
