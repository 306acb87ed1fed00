"""Closed-form velocity asymptotes of the friction force and the kink locator.

Dimensionless laws return |F|/|F0| (positive for drag). The ``*_si`` variants
evaluate the same laws directly in SI units (newtons, negative for drag) so
that the two presentations can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .constants import C, EPSILON_0, HBAR
from .params import SIInputs, from_si
from .response import ResponseContext

# orientation averages of the LTE and J angular factors
AVG_A_LTE = Fraction(21, 20)
AVG_A_J = Fraction(87, 80)

LTE_COEFF = Fraction(45, 16)
J_COEFF = Fraction(9, 4)
# SI prefactors multiplying hbar alpha0^2 rho^2 v^3 / (2 z)^10 / pi^3
LTE_SI_COEFF = 90
J_SI_COEFF = 72
TOTAL_SI_COEFF = Fraction(864, 5)
GAMMA_FORM_COEFF = Fraction(216, 5)


def total_si_identity() -> bool:
    """90 <A_LTE> + 72 <A_J> == 864/5, in exact arithmetic."""
    return LTE_SI_COEFF * AVG_A_LTE + J_SI_COEFF * AVG_A_J == TOTAL_SI_COEFF


def dimensionless_identity() -> bool:
    """45/16 + 9/4 == 81/16, the A = 1 sum of the two low-velocity coefficients."""
    return LTE_COEFF + J_COEFF == Fraction(81, 16)


def averaged_deficit() -> Fraction:
    """Orientation-averaged J/LTE ratio at low velocity."""
    return (J_SI_COEFF * AVG_A_J) / (LTE_SI_COEFF * AVG_A_LTE)


def _check_v(V: float) -> None:
    if not (V > 0 and math.isfinite(V)):
        raise ValueError(f"V must be > 0, got {V!r}")


def _base(ctx: ResponseContext, V: float, include_shift: bool) -> float:
    p = ctx.params
    value = (p.alpha_sp / (24.0 * math.pi * p.Z**3)) * (p.eta**2 / (24.0 * math.pi)) * V**3 / p.Z**7
    if include_shift:
        shift = p.coupling * ctx.model.r0 * ctx.factors.A_zero / (24.0 * math.pi)
        value /= abs(1.0 - shift) ** 2
    return value


def lte_low_v(ctx: ResponseContext, V: float, include_shift: bool = False,
              averaged: bool = False) -> float:
    _check_v(V)
    a = float(AVG_A_LTE) if averaged else ctx.factors.A_lte
    return float(LTE_COEFF) * a * _base(ctx, V, include_shift)


def j_low_v(ctx: ResponseContext, V: float, include_shift: bool = False,
            averaged: bool = False) -> float:
    _check_v(V)
    a = float(AVG_A_J) if averaged else ctx.factors.A_j
    return float(J_COEFF) * a * _base(ctx, V, include_shift)


def total_low_v(ctx: ResponseContext, V: float, include_shift: bool = False,
                averaged: bool = False) -> float:
    return (lte_low_v(ctx, V, include_shift, averaged)
            + j_low_v(ctx, V, include_shift, averaged))


def induced_damping(ctx: ResponseContext) -> float:
    """Orientation-averaged surface-induced decay rate, in units of omega_sp."""
    p = ctx.params
    return p.alpha_sp * p.xi_a**2 * p.eta / (24.0 * math.pi * p.Z**3)


def gamma_form(ctx: ResponseContext, V: float) -> float:
    """Low-velocity force written through the induced decay rate, (27/5) g^2 V^3 / (Z^4 xi_a^4 alpha_sp)."""
    _check_v(V)
    p = ctx.params
    g = induced_damping(ctx)
    return 27.0 / 5.0 * g**2 * V**3 / (p.Z**4 * p.xi_a**4 * p.alpha_sp)


def _high_v_log(ctx: ResponseContext, V: float) -> float:
    p = ctx.params
    x = p.Z * p.xi_a / V
    return (math.log(p.eta / 24.0)
            + 0.5 * math.log(p.xi_a**7 / (math.pi * p.Z**5 * V**3))
            + math.log1p(2.5 / x)
            - 2.0 * x)


def high_v(ctx: ResponseContext, V: float, with_flag: bool = False):
    """Resonant second-order law (eta/24) sqrt(xi_a^7/(pi Z^5 V^3)) (1 + 5V/(2 Z xi_a)) e^{-2 Z xi_a/V}.

    Evaluated in the log domain. When the result underflows it is exactly 0
    and, with ``with_flag``, the second returned item is True.
    """
    _check_v(V)
    log_value = _high_v_log(ctx, V)
    value = math.exp(log_value) if log_value > -745.0 else 0.0
    underflow = value == 0.0
    return (value, underflow) if with_flag else value


# --- SI presentations ---------------------------------------------------------

def _si_scale(inputs: SIInputs) -> float:
    _, norm, _ = from_si(inputs)
    return HBAR * inputs.alpha0**2 * norm.rho**2 * inputs.v**3 / (2.0 * inputs.z_a) ** 10 / math.pi**3


def lte_low_v_si(inputs: SIInputs, A_lte: float = float(AVG_A_LTE)) -> float:
    return -LTE_SI_COEFF * A_lte * _si_scale(inputs)


def j_low_v_si(inputs: SIInputs, A_j: float = float(AVG_A_J)) -> float:
    return -J_SI_COEFF * A_j * _si_scale(inputs)


def total_low_v_si(inputs: SIInputs) -> float:
    return -float(TOTAL_SI_COEFF) * _si_scale(inputs)


def gamma_induced_si(inputs: SIInputs) -> float:
    """gamma(z_a) = alpha0 omega_a^2 rho / (4 pi z_a^3), in 1/s."""
    _, norm, _ = from_si(inputs)
    return inputs.alpha0 * inputs.omega_a**2 * norm.rho / (4.0 * math.pi * inputs.z_a**3)


def gamma_form_si(inputs: SIInputs) -> float:
    g = gamma_induced_si(inputs)
    return (-float(GAMMA_FORM_COEFF) / math.pi * HBAR * g**2 * inputs.v**3
            / (2.0 * inputs.z_a * inputs.omega_a) ** 4)


def high_v_si(inputs: SIInputs) -> float:
    _, norm, _ = from_si(inputs)
    w_sp = norm.omega_sp
    c_v = inputs.v / (inputs.z_a * inputs.omega_a)
    pref = HBAR * w_sp**4 * inputs.alpha0 / (math.pi * C**4) * inputs.Gamma / (16.0 * EPSILON_0)
    root = math.sqrt((inputs.omega_a / w_sp) ** 7
                     / (math.pi * (w_sp * inputs.z_a / C) ** 5 * (inputs.v / C) ** 3))
    return -pref * root * (1.0 + 2.5 * c_v) * math.exp(-2.0 / c_v)


# --- crossover ---------------------------------------------------------------

class CrossoverError(ValueError):
    pass


def crossover_velocity(ctx: ResponseContext, lo: float = 1e-6, hi: float = 1e-1,
                       scan_points: int = 400, rel_tol: float = 1e-4) -> float:
    """Velocity where the low-velocity total meets the resonant law.

    The bracket is scanned on a log grid first; exactly one sign change is
    required, then the root is polished by Brent's method in log V.
    """
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")

    def diff(logv: float) -> float:
        V = math.exp(logv)
        # compare logarithms so the exponentially small side stays resolved
        h = _high_v_log(ctx, V)
        return math.log(total_low_v(ctx, V)) - h

    grid = np.linspace(math.log(lo), math.log(hi), scan_points)
    signs = np.sign([diff(x) for x in grid])
    changes = np.flatnonzero(signs[:-1] * signs[1:] < 0)
    if changes.size == 0:
        raise CrossoverError(f"low- and high-velocity laws do not cross in ({lo}, {hi})")
    if changes.size > 1:
        raise CrossoverError(f"laws cross {changes.size} times in ({lo}, {hi})")
    i = int(changes[0])
    root = brentq(diff, grid[i], grid[i + 1], xtol=rel_tol * 1e-2, rtol=4 * np.finfo(float).eps)
    return math.exp(root)


# --- registry ------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticLaw:
    regime: str
    validity: str
    evaluate: Callable[[ResponseContext, float], float]


LAWS: dict[str, AsymptoticLaw] = {
    "low_lte": AsymptoticLaw("low_lte", "V well below the kink", lte_low_v),
    "low_j": AsymptoticLaw("low_j", "V well below the kink", j_low_v),
    "low_total": AsymptoticLaw("low_total", "V well below the kink", total_low_v),
    "high_resonant": AsymptoticLaw("high_resonant", "decade above the kink", high_v),
    "gamma_form": AsymptoticLaw("gamma_form", "V well below the kink, orientation averaged",
                                gamma_form),
}
