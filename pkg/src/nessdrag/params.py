"""Dimensionless parameter set, SI conversion and the force normalisation F0."""

from __future__ import annotations

import math
import shlex
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .constants import C, EPSILON_0, EV_TO_RAD_S, HBAR

DIAGONAL_DIRECTION = (1.0 / math.sqrt(3.0),) * 3


@dataclass(frozen=True)
class SIInputs:
    """Physical inputs in SI units.

    ``omega_p`` may be given in eV by setting ``omega_p_unit="eV"``; every other
    frequency is in rad/s.
    """

    alpha0: float  # F m^2
    omega_p: float
    Gamma: float
    z_a: float
    omega_a: float
    v: float
    omega_p_unit: str = "rad/s"

    def __post_init__(self):
        for name in ("alpha0", "omega_p", "Gamma", "z_a", "omega_a", "v"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.v >= C:
            raise ValueError(f"v must be below the speed of light, got {self.v!r}")
        if self.omega_p_unit not in ("rad/s", "eV"):
            raise ValueError(f"omega_p_unit must be 'rad/s' or 'eV', got {self.omega_p_unit!r}")

    @property
    def omega_p_rad_s(self) -> float:
        if self.omega_p_unit == "eV":
            return self.omega_p * EV_TO_RAD_S
        return self.omega_p


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless configuration.

    xi_a = omega_a/omega_sp, Z = z_a omega_sp/c, eta = Gamma/omega_sp and
    alpha_sp = 3 alpha0 omega_sp^3/(eps0 c^3). ``orientation`` is stored as a
    unit 3-vector (normalised on construction).
    """

    xi_a: float
    Z: float
    eta: float
    alpha_sp: float
    orientation: tuple[float, float, float] = field(default=DIAGONAL_DIRECTION)

    def __post_init__(self):
        for name in ("xi_a", "Z", "eta", "alpha_sp"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        d = np.asarray(self.orientation, dtype=float)
        if d.shape != (3,):
            raise ValueError("orientation must be a 3-vector")
        norm = float(np.linalg.norm(d))
        if not norm > 0:
            raise ValueError("orientation must be non-zero")
        object.__setattr__(self, "orientation", tuple(float(c) for c in d / norm))

    @property
    def coupling(self) -> float:
        """alpha_sp / Z^3, the strength of the surface self-interaction."""
        return self.alpha_sp / self.Z**3


@dataclass(frozen=True)
class NormalizationInfo:
    F0_SI: float  # N, negative (drag convention)
    omega_sp: float  # rad/s
    rho: float  # Ohm m


def omega_sp_from_plasma(omega_p: float) -> float:
    """Drude surface-plasmon frequency omega_p / sqrt(2)."""
    return omega_p / math.sqrt(2.0)


def force_scale(alpha0: float, omega_sp: float) -> float:
    """F0 = -3 hbar omega_sp^5 alpha0 / (2 pi eps0 c^4), in newtons."""
    return -3.0 * HBAR * omega_sp**5 * alpha0 / (2.0 * math.pi * EPSILON_0 * C**4)


def alpha_sp_from_si(alpha0: float, omega_sp: float) -> float:
    return 3.0 * alpha0 * omega_sp**3 / (EPSILON_0 * C**3)


def alpha0_from_alpha_sp(alpha_sp: float, omega_sp: float) -> float:
    return alpha_sp * EPSILON_0 * C**3 / (3.0 * omega_sp**3)


def from_si(inputs: SIInputs, orientation=DIAGONAL_DIRECTION) -> tuple[SystemParams, NormalizationInfo, float]:
    """Reduce SI inputs to ``(SystemParams, NormalizationInfo, V)``."""
    omega_p = inputs.omega_p_rad_s
    omega_sp = omega_sp_from_plasma(omega_p)
    params = SystemParams(
        xi_a=inputs.omega_a / omega_sp,
        Z=inputs.z_a * omega_sp / C,
        eta=inputs.Gamma / omega_sp,
        alpha_sp=alpha_sp_from_si(inputs.alpha0, omega_sp),
        orientation=orientation,
    )
    rho = inputs.Gamma / (EPSILON_0 * omega_p**2)
    norm = NormalizationInfo(F0_SI=force_scale(inputs.alpha0, omega_sp), omega_sp=omega_sp, rho=rho)
    return params, norm, inputs.v / C


def si_inputs(params: SystemParams, norm: NormalizationInfo, V: float) -> SIInputs:
    """Inverse of :func:`from_si` (omega_p returned in rad/s)."""
    w = norm.omega_sp
    return SIInputs(
        alpha0=alpha0_from_alpha_sp(params.alpha_sp, w),
        omega_p=math.sqrt(2.0) * w,
        Gamma=params.eta * w,
        z_a=params.Z * C / w,
        omega_a=params.xi_a * w,
        v=V * C,
    )


def to_si(params: SystemParams, norm: NormalizationInfo, F_normalized: float) -> float:
    """Force in newtons. F0 is negative, so positive normalised values are drag."""
    return F_normalized * norm.F0_SI


def normalization_for(params: SystemParams, omega_sp: float) -> NormalizationInfo:
    """Build the normalisation for a dimensionless parameter set and a chosen omega_sp."""
    alpha0 = alpha0_from_alpha_sp(params.alpha_sp, omega_sp)
    gamma = params.eta * omega_sp
    rho = gamma / (EPSILON_0 * 2.0 * omega_sp**2)
    return NormalizationInfo(F0_SI=force_scale(alpha0, omega_sp), omega_sp=omega_sp, rho=rho)


# --- flat ``key = value`` configuration files ---------------------------------

CONFIG_KEYS = (
    "alpha0_Fm2", "omega_p_eV", "Gamma_over_omega_sp", "Z", "xi_a", "eta",
    "alpha_sp", "dipole", "material", "r0",
)

DEFAULT_CONFIG = {
    "alpha0_Fm2": "5.26e-39",
    "omega_p_eV": "9",
    "Gamma_over_omega_sp": "0.1",
    "Z": "0.1",
    "xi_a": "0.2",
    "dipole": "1,1,1",
    "material": "drude",
}


def parse_config(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, values may be quoted."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        parts = shlex.split(value)
        out[key] = parts[0] if len(parts) == 1 else value
    return out


def load_config(path: str | Path) -> dict[str, str]:
    return parse_config(Path(path).read_text())


def parse_dipole(value: str) -> tuple[float, float, float]:
    parts = [p for p in value.replace(" ", "").split(",") if p]
    if len(parts) != 3:
        raise ValueError(f"dipole must be 'x,y,z', got {value!r}")
    return tuple(float(p) for p in parts)  # type: ignore[return-value]


def params_from_config(cfg: Mapping[str, str]) -> tuple[SystemParams, NormalizationInfo | None]:
    """Resolve a config mapping; dimensionless keys win over SI ones."""
    omega_sp = None
    alpha_sp = None
    eta = None
    if "omega_p_eV" in cfg:
        omega_sp = omega_sp_from_plasma(float(cfg["omega_p_eV"]) * EV_TO_RAD_S)
        if "alpha0_Fm2" in cfg:
            alpha_sp = alpha_sp_from_si(float(cfg["alpha0_Fm2"]), omega_sp)
    if "Gamma_over_omega_sp" in cfg:
        eta = float(cfg["Gamma_over_omega_sp"])
    if "alpha_sp" in cfg:
        alpha_sp = float(cfg["alpha_sp"])
    if "eta" in cfg:
        eta = float(cfg["eta"])
    missing = [k for k, v in (("alpha_sp", alpha_sp), ("eta", eta)) if v is None]
    missing += [k for k in ("Z", "xi_a") if k not in cfg]
    if missing:
        raise ValueError(f"config does not determine: {', '.join(missing)}")
    params = SystemParams(
        xi_a=float(cfg["xi_a"]),
        Z=float(cfg["Z"]),
        eta=eta,
        alpha_sp=alpha_sp,
        orientation=parse_dipole(cfg.get("dipole", "1,1,1")),
    )
    norm = normalization_for(params, omega_sp) if omega_sp is not None else None
    return params, norm


def reference_params() -> SystemParams:
    """Parameter set of the published velocity sweep (Rb above a 9 eV Drude metal)."""
    return params_from_config(DEFAULT_CONFIG)[0]
