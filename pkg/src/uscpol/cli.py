"""Command-line front end; one subcommand per figure family.

Exit codes: 0 success, 2 config error, 3 numeric/domain error,
4 resolvability error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__, classical, correlator, emission, hopfield, tomography, vacuum
from ._backend import backend_name
from .errors import ConfigError, NumericsError, ResolvabilityError, UscpolError
from .output import atomic_write_text, save_spectral_map, write_csv, write_manifest
from .params import load_config

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_RESOLVABILITY = 4


def _default_threads() -> int:
    env = os.environ.get("USCPOL_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _load(args):
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config!r}: {exc}")
    return load_config(text)


def _k_grid(extras, default=(1e-3, 3.0, 400)):
    return extras.get("k_grid", np.linspace(*default))


def _omega_grid(extras, default=(0.05, 3.2, 2000)):
    return extras.get("omega_grid", np.linspace(*default))


def _finish(args, command, params, extras, outputs, diagnostics=None):
    manifest = os.path.join(args.out, f"{command}_manifest.json")
    write_manifest(manifest, command, params, extras, outputs,
                   version=__version__, backend=backend_name(),
                   threads=args.threads, diagnostics=diagnostics)
    for f in list(outputs) + [manifest]:
        print(f)


def cmd_dispersion(args):
    params, extras = _load(args)
    k = _k_grid(extras)
    branches = os.path.join(args.out, "branches.csv")
    write_csv(branches, hopfield.branch_table(params, k))
    spectra = [hopfield.three_mode_spectrum(params, kk) for kk in np.abs(k)]
    cols = {"k": k}
    for i in range(3):
        cols[f"omega_{i + 1}"] = np.array([s.omega[i] for s in spectra])
        for j, lab in enumerate(("ph", "d", "e")):
            cols[f"w_{lab}_{i + 1}"] = np.array([s.weights[i][j] for s in spectra])
        cols[f"dominant_{i + 1}"] = np.array([s.dominant(i) for s in spectra])
    spectrum3 = os.path.join(args.out, "spectrum3.csv")
    write_csv(spectrum3, cols)
    _finish(args, "dispersion", params, extras, [branches, spectrum3])


def cmd_vacuum(args):
    params, extras = _load(args)
    k = _k_grid(extras)
    if np.any(k <= 0):
        raise NumericsError("vacuum observables need k > 0; adjust k_grid")
    path = os.path.join(args.out, "vacuum.csv")
    write_csv(path, vacuum.vacuum_table(params, k))
    _finish(args, "vacuum", params, extras, [path])


def cmd_potential(args):
    params, extras = _load(args)
    r = extras.get("r_grid")
    if r is None:
        r = np.geomspace(0.05, 50.0, 201)
    omega = params.omega_e
    center = correlator.gap_center(params)
    ref = correlator.effective_potential(params, center, r)
    norm = float(np.abs(ref.u).max())
    if omega == center:
        prof = correlator.PotentialProfile(r=ref.r, u=ref.u, omega=center,
                                           normalization=norm)
    else:
        prof = correlator.effective_potential(params, omega, r, normalization=norm)
    pot_path = os.path.join(args.out, "potential.csv")
    write_csv(pot_path, {"r": prof.r, "U_raw": prof.u,
                         "U_normalized": prof.u_normalized})
    k = _k_grid(extras)
    kern_path = os.path.join(args.out, "kernel.csv")
    write_csv(kern_path, {"k": k, "K_value": correlator.kernel_K(params, k, omega)})
    outputs = [pot_path, kern_path]
    diagnostics = {"normalization": norm, "omega_probe": omega}
    if "k_grid" in extras:
        trips = correlator.find_phase_matched_triplets(params, k, tol_omega=1e-3)
        trip_path = os.path.join(args.out, "triplets.json")
        atomic_write_text(trip_path, json.dumps(
            [t.as_record() for t in trips], indent=2) + "\n")
        outputs.append(trip_path)
        diagnostics["triplet_tol_omega"] = 1e-3
    _finish(args, "potential", params, extras, outputs, diagnostics)


def cmd_emission(args):
    params, extras = _load(args)
    k = _k_grid(extras)
    model = extras.get("loss_model", "combined")
    path = os.path.join(args.out, "emission.csv")
    write_csv(path, emission.emission_table(params, k, model=model))
    _finish(args, "emission", params, extras, [path])


def cmd_transmission(args):
    params, extras = _load(args)
    smap = classical.transmission_map(params, _k_grid(extras, (0.02, 3.5, 400)),
                                      _omega_grid(extras), threads=args.threads)
    ext = "bin" if args.format == "bin" else "csv"
    path = os.path.join(args.out, f"tmap.{ext}")
    save_spectral_map(path, smap, fmt=ext)
    _finish(args, "transmission", params, extras, [path])


def cmd_tomography(args):
    params, extras = _load(args)
    sweep = extras.get("omega_e_sweep")
    if sweep is None:
        hi_edge = params.omega_d_dressed
        sweep = np.concatenate([
            np.linspace(0.30 * params.omega_d, 0.95 * params.omega_d, 20),
            np.linspace(1.03 * hi_edge, 1.80 * hi_edge, 20),
        ])
    curve = tomography.tomography_sweep(
        params, sweep, _k_grid(extras, (0.02, 3.5, 400)),
        _omega_grid(extras), threads=args.threads)
    path = os.path.join(args.out, "reconstruction.csv")
    write_csv(path, {"k": curve.k, "tan_theta_rec": curve.tan_theta_rec,
                     "tan_theta_analytic": curve.tan_theta_analytic,
                     "rel_error": curve.rel_error})
    diagnostics = {
        "median_rel_error": curve.median_rel_error,
        "resolvability_floor": max(params.gamma_c, params.kappa_d, params.kappa_e) / 2,
        "window": tomography.default_window(params),
        "common_grid": "union of record k_x within the branch overlap",
        "records": [asdict(r) for r in curve.records],
        "skipped": [{"omega_e": we, "reason": reason} for we, reason in curve.skipped],
    }
    _finish(args, "tomography", params, extras, [path], diagnostics)


def cmd_permittivity(args):
    params, extras = _load(args)
    w = _omega_grid(extras, (0.05, 3.0, 500))
    both = [classical.permittivity_both(params, x) for x in w]
    eps_path = os.path.join(args.out, "permittivity.csv")
    write_csv(eps_path, {
        "omega": w,
        "eps_hopfield_re": np.array([b.eps_hopfield.real for b in both]),
        "eps_hopfield_im": np.array([b.eps_hopfield.imag for b in both]),
        "eps_matrix_re": np.array([b.eps_matrix.real for b in both]),
        "eps_matrix_im": np.array([b.eps_matrix.imag for b in both]),
    })
    lossless = params.lossless()
    k = _k_grid(extras, (0.01, 3.0, 100))
    rows = {"k": k}
    roots = [classical.classical_dispersion_roots(lossless, kk) for kk in k]
    nmax = max(len(r) for r in roots)
    for i in range(nmax):
        rows[f"omega_{i + 1}"] = np.array(
            [r[i] if i < len(r) else np.nan for r in roots])
    roots_path = os.path.join(args.out, "roots.csv")
    write_csv(roots_path, rows)
    _finish(args, "permittivity", params, extras, [eps_path, roots_path],
            diagnostics={"roots_computed_lossless": True})


COMMANDS = {
    "dispersion": cmd_dispersion,
    "vacuum": cmd_vacuum,
    "potential": cmd_potential,
    "emission": cmd_emission,
    "transmission": cmd_transmission,
    "tomography": cmd_tomography,
    "permittivity": cmd_permittivity,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uscpol",
        description="Ultra-strong-coupling cavity-dresser-emitter calculator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, help=f"run the {name} pipeline")
        sp.add_argument("--config", required=True, help="path to the config file")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--threads", type=int, default=_default_threads(),
                        help="worker cap inside module calls (default: "
                             "USCPOL_THREADS or 1)")
        sp.add_argument("--format", choices=("csv", "bin"), default="csv",
                        help="spectral map serialization")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"uscpol: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResolvabilityError as exc:
        print(f"uscpol: resolvability error: {exc}", file=sys.stderr)
        return EXIT_RESOLVABILITY
    except NumericsError as exc:
        print(f"uscpol: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except UscpolError as exc:
        print(f"uscpol: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
