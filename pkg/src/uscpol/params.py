"""Parameter model, unit conventions and configuration ingestion.

Everything downstream works in dimensionless units with
omega_d = hbar = eps0 = c = 1, so every frequency is a ratio to the
dresser ISB frequency and lengths are measured in r0 = c/omega_d.
The only SI entry point is :func:`rabi_from_doping`.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, fields, replace

import numpy as np
import scipy.constants as sc

from .errors import ConfigError, DomainError, ValidationError

__all__ = [
    "SystemParams",
    "CavityDispersion",
    "DopingInput",
    "rabi_from_doping",
    "load_config",
    "serialize_config",
    "grid_from_spec",
]

# Linewidth defaults used when a config omits them (tomography demo values).
DEFAULT_GAMMA_C = 0.01
DEFAULT_KAPPA_D = 0.05
DEFAULT_KAPPA_E = 0.05

# Advisory threshold: the emitter treatment assumes a weak emitter.
WEAK_EMITTER_FRACTION = 0.3


@dataclass(frozen=True)
class SystemParams:
    """All frequencies, couplings and linewidths in units of omega_d.

    Instances are immutable; share them freely across threads.
    """

    Omega_d: float
    omega_e: float
    Omega_e: float
    omega_d: float = 1.0
    gamma_c: float = DEFAULT_GAMMA_C
    kappa_d: float = DEFAULT_KAPPA_D
    kappa_e: float = DEFAULT_KAPPA_E

    def __post_init__(self):
        if not self.omega_d > 0:
            raise ValidationError(f"omega_d must be > 0 (got {self.omega_d})")
        if not self.omega_e > 0:
            raise ValidationError(f"omega_e must be > 0 (got {self.omega_e})")
        for name in ("Omega_d", "Omega_e", "gamma_c", "kappa_d", "kappa_e"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValidationError(f"{name} must be >= 0 and finite (got {v})")
        if self.Omega_e > WEAK_EMITTER_FRACTION * self.omega_e:
            warnings.warn(
                f"Omega_e = {self.Omega_e:g} exceeds "
                f"{WEAK_EMITTER_FRACTION:g}*omega_e = "
                f"{WEAK_EMITTER_FRACTION * self.omega_e:g}; the weak-emitter "
                "treatment may be inaccurate",
                stacklevel=3,
            )

    @property
    def omega_d_dressed(self) -> float:
        """Upper gap edge sqrt(omega_d^2 + Omega_d^2)."""
        return float(np.hypot(self.omega_d, self.Omega_d))

    @property
    def gap(self) -> tuple[float, float]:
        """Polariton gap (omega_d, sqrt(omega_d^2 + Omega_d^2))."""
        return (self.omega_d, self.omega_d_dressed)

    def lossless(self) -> "SystemParams":
        """Copy with all linewidths set to zero."""
        return replace(self, gamma_c=0.0, kappa_d=0.0, kappa_e=0.0)


@dataclass(frozen=True)
class CavityDispersion:
    """Photon dispersion omega_k = speed * |k|.

    Only the linear TM0 branch ships; the type exists so a different
    mapping can be plugged in without touching signatures.
    """

    kind: str = "linear-tm0"
    speed: float = 1.0

    def __post_init__(self):
        if self.kind != "linear-tm0":
            raise ValidationError(f"unknown dispersion kind {self.kind!r}")
        if not self.speed > 0:
            raise ValidationError("dispersion speed must be > 0")

    def omega(self, k):
        return self.speed * np.abs(k)


LINEAR_TM0 = CavityDispersion()


@dataclass(frozen=True)
class DopingInput:
    """SI inputs for the doping-to-Rabi conversion.

    n_2d may be zero (undoped probe), the remaining fields must be
    strictly positive; f_osc is capped at 1 (parabolic-well limit).
    """

    n_2d: float       # sheet electron density, m^-2
    f_osc: float      # dimensionless oscillator strength, (0, 1]
    L_c: float        # cavity height, m
    m_eff: float      # effective electron mass, kg

    def __post_init__(self):
        if not np.isfinite(self.n_2d) or self.n_2d < 0:
            raise DomainError(f"n_2d must be >= 0 (got {self.n_2d})")
        if not 0 < self.f_osc <= 1:
            raise DomainError(f"f_osc must lie in (0, 1] (got {self.f_osc})")
        if not self.L_c > 0:
            raise DomainError(f"L_c must be > 0 (got {self.L_c})")
        if not self.m_eff > 0:
            raise DomainError(f"m_eff must be > 0 (got {self.m_eff})")


def rabi_from_doping(d: DopingInput) -> float:
    """Collective Rabi frequency Omega = sqrt(f e^2 n / (eps0 m L_c)), rad/s.

    Uses CODATA values for e and eps0 from scipy.constants.
    """
    e = sc.elementary_charge
    return float(np.sqrt(d.f_osc * e * e * d.n_2d / (sc.epsilon_0 * d.m_eff * d.L_c)))


# --------------------------------------------------------------------------
# config grammar:  line-oriented "key = value", "#" comments,
# grids as "name = start:stop:count" with inclusive endpoints
# --------------------------------------------------------------------------

_PARAM_KEYS = ("omega_d", "Omega_d", "omega_e", "Omega_e",
               "gamma_c", "kappa_d", "kappa_e")
_REQUIRED_KEYS = ("Omega_d", "omega_e", "Omega_e")
_GRID_KEYS = ("k_grid", "omega_grid", "r_grid", "omega_e_sweep")
_CHOICE_KEYS = {"loss_model": ("cavity", "dresser", "combined")}

_GRID_RE = re.compile(r"^([^:]+):([^:]+):([^:]+)$")


def grid_from_spec(spec: str, line=None, column=None) -> np.ndarray:
    """Parse "start:stop:count" into an inclusive linspace."""
    m = _GRID_RE.match(spec.strip())
    if not m:
        raise ConfigError(f"grid spec {spec!r} is not start:stop:count",
                          line, column)
    try:
        start, stop = float(m.group(1)), float(m.group(2))
        count = int(m.group(3))
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {spec!r}: {exc}", line, column)
    if count < 2:
        raise ConfigError(f"grid count must be >= 2 (got {count})",
                          line, column)
    return np.linspace(start, stop, count)


def load_config(text: str):
    """Parse a config document into (SystemParams, extras).

    extras is a dict holding any declared grids (numpy arrays) and the
    optional loss_model string.  Unknown keys are rejected with their
    position; missing required keys are reported together.
    """
    seen: dict[str, object] = {}
    positions: dict[str, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        payload = raw.split("#", 1)[0]
        if not payload.strip():
            continue
        if "=" not in payload:
            raise ConfigError("expected 'key = value'", lineno,
                              len(payload) - len(payload.lstrip()) + 1)
        key_part, value_part = payload.split("=", 1)
        key = key_part.strip()
        column = raw.index(key) + 1 if key and key in raw else 1
        value = value_part.strip()
        if not key:
            raise ConfigError("empty key", lineno, column)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", lineno, column)
        if key in _PARAM_KEYS:
            try:
                seen[key] = float(value)
            except ValueError:
                raise ConfigError(f"{key} expects a number, got {value!r}",
                                  lineno, raw.index(value) + 1 if value else column)
        elif key in _GRID_KEYS:
            vcol = raw.index(value) + 1 if value else column
            seen[key] = grid_from_spec(value, lineno, vcol)
        elif key in _CHOICE_KEYS:
            if value not in _CHOICE_KEYS[key]:
                raise ConfigError(
                    f"{key} must be one of {', '.join(_CHOICE_KEYS[key])}",
                    lineno, raw.index(value) + 1 if value else column)
            seen[key] = value
        else:
            raise ConfigError(f"unknown key {key!r}", lineno, column)
        positions[key] = (lineno, column)

    missing = [k for k in _REQUIRED_KEYS if k not in seen]
    if missing:
        raise ConfigError("missing required keys: " + ", ".join(missing))

    kwargs = {k: seen[k] for k in _PARAM_KEYS if k in seen}
    params = SystemParams(**kwargs)
    extras = {k: seen[k] for k in (*_GRID_KEYS, *_CHOICE_KEYS) if k in seen}
    return params, extras


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def serialize_config(params: SystemParams, extras: dict | None = None) -> str:
    """Render a config document that load_config parses back identically."""
    lines = [f"{f.name} = {_fmt(getattr(params, f.name))}"
             for f in fields(params)]
    for key, value in (extras or {}).items():
        if key in _CHOICE_KEYS:
            lines.append(f"{key} = {value}")
        else:
            arr = np.asarray(value)
            lines.append(f"{key} = {_fmt(arr[0])}:{_fmt(arr[-1])}:{arr.size}")
    return "\n".join(lines) + "\n"
