"""Dressed polariton linewidths and modified spontaneous-emission rates.

Ohmic baths in the rotating-wave weak system-bath limit give linewidths
that are pure trigonometric redistributions of the bare rates:

    cavity-dominated:   gamma_lp = gamma * cos^2(theta),  gamma_up = gamma * sin^2(theta)
    dresser-dominated:  gamma_lp = kappa_d * sin^2(theta), gamma_up = kappa_d * cos^2(theta)

and the Purcell rate into a resonant branch is Omega_branch^2/(2*gamma_branch),
evaluated with the emitter tuned to that branch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hopfield import mixing_sin_cos, mixing_weights, polariton_frequencies
from .params import LINEAR_TM0, SystemParams

__all__ = [
    "LossModel",
    "EmissionPoint",
    "polariton_linewidths",
    "purcell_rates",
    "emission_point",
    "emission_table",
]

VARIANTS = ("cavity", "dresser", "combined")


@dataclass(frozen=True)
class LossModel:
    """Loss mechanism selector with optional bare-rate overrides.

    variant is one of "cavity", "dresser" or "combined"; rates default
    to the SystemParams values at call time.
    """

    variant: str = "combined"
    gamma_c: float | None = None
    kappa_d: float | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"loss model must be one of {VARIANTS} (got {self.variant!r})")
        for name in ("gamma_c", "kappa_d"):
            v = getattr(self, name)
            if v is not None and (not np.isfinite(v) or v < 0):
                raise DomainError(f"{name} override must be >= 0 (got {v})")

    def rates(self, p: SystemParams):
        g = p.gamma_c if self.gamma_c is None else self.gamma_c
        kd = p.kappa_d if self.kappa_d is None else self.kappa_d
        return g, kd


@dataclass(frozen=True)
class EmissionPoint:
    k: float
    theta: float
    gamma_lp: float
    gamma_up: float
    Gamma_lp: float
    Gamma_up: float
    regime_flag: str  # "weak" or "strong:<branches>" when gamma < 3*Omega


def _as_model(model) -> LossModel:
    if isinstance(model, LossModel):
        return model
    return LossModel(variant=model)


def polariton_linewidths(p: SystemParams, omega_k, model="combined"):
    """Dressed linewidths (gamma_lp, gamma_up) under the chosen loss model."""
    model = _as_model(model)
    g, kd = model.rates(p)
    sin2, cos2 = mixing_weights(p, omega_k)
    sin2 = np.asarray(sin2)
    cos2 = np.asarray(cos2)
    if model.variant == "cavity":
        lp, up = g * cos2, g * sin2
    elif model.variant == "dresser":
        lp, up = kd * sin2, kd * cos2
    else:
        lp, up = g * cos2 + kd * sin2, g * sin2 + kd * cos2
    if np.ndim(lp) == 0:
        return float(lp), float(up)
    return lp, up


def purcell_rates(p: SystemParams, omega_k, model="combined"):
    """Spontaneous-emission rates (Gamma_lp, Gamma_up) with the emitter
    resonant with the respective branch.

    Gamma = Omega_branch^2/(2*gamma_branch) where Omega_branch is taken at
    omega_e = omega_branch(k), i.e. Omega_e^2 (omega_k/omega_branch)^2
    times the trig weight over the dressed linewidth.  A branch whose
    dressed linewidth vanishes has a formally infinite rate; that case
    needs a strong-coupling treatment and raises instead.
    """
    model = _as_model(model)
    omega_k = np.asarray(omega_k, dtype=float)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    sin2, cos2 = mixing_weights(p, omega_k)
    g_lp, g_up = polariton_linewidths(p, omega_k, model)
    if np.any(np.asarray(g_lp) == 0) or np.any(np.asarray(g_up) == 0):
        raise DomainError(
            "a dressed linewidth vanishes: the weak-coupling rate diverges; "
            "use a strong-coupling treatment for that branch")
    O_lp2 = p.Omega_e**2 * (omega_k / omega_lp) ** 2 * np.asarray(cos2)
    O_up2 = p.Omega_e**2 * (omega_k / omega_up) ** 2 * np.asarray(sin2)
    G_lp = O_lp2 / (2.0 * np.asarray(g_lp))
    G_up = O_up2 / (2.0 * np.asarray(g_up))
    if np.ndim(G_lp) == 0:
        return float(G_lp), float(G_up)
    return G_lp, G_up


def _regime_flag(g_lp, g_up, O_lp, O_up) -> str:
    # weak-coupling validity needs gamma >> Omega; flag below 3x
    strong = [b for b, g, O in (("lp", g_lp, O_lp), ("up", g_up, O_up)) if g < 3 * O]
    return "weak" if not strong else "strong:" + "+".join(strong)


def emission_point(p: SystemParams, k: float, model="combined",
                   dispersion=LINEAR_TM0) -> EmissionPoint:
    """Scalar per-wavevector emission record."""
    t = emission_table(p, np.asarray([float(k)]), model=model,
                       dispersion=dispersion)
    return EmissionPoint(k=float(k), theta=float(t["theta"][0]),
                         gamma_lp=float(t["gamma_lp"][0]),
                         gamma_up=float(t["gamma_up"][0]),
                         Gamma_lp=float(t["Gamma_lp"][0]),
                         Gamma_up=float(t["Gamma_up"][0]),
                         regime_flag=str(t["regime_flag"][0]))


def emission_table(p: SystemParams, k_grid, model="combined", dispersion=LINEAR_TM0):
    """Column arrays for the emission CSV, including the validity flag."""
    model = _as_model(model)
    k = np.asarray(k_grid, dtype=float)
    omega_k = dispersion.omega(k)
    omega_lp, omega_up = polariton_frequencies(p, omega_k)
    sin_t, cos_t = mixing_sin_cos(p, omega_k)
    theta = np.arctan2(sin_t, cos_t)
    g_lp, g_up = polariton_linewidths(p, omega_k, model)
    G_lp, G_up = purcell_rates(p, omega_k, model)
    O_lp = p.Omega_e * (omega_k / omega_lp) * cos_t
    O_up = p.Omega_e * (omega_k / omega_up) * sin_t
    flags = [_regime_flag(gl, gu, ol, ou)
             for gl, gu, ol, ou in zip(np.atleast_1d(g_lp), np.atleast_1d(g_up),
                                       np.atleast_1d(O_lp), np.atleast_1d(O_up))]
    return {
        "k": k, "theta": theta,
        "gamma_lp": g_lp, "gamma_up": g_up,
        "Gamma_lp": G_lp, "Gamma_up": G_up,
        "regime_flag": np.array(flags),
    }
