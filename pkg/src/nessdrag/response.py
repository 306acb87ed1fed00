"""Doppler-shifted response functions of a dipole moving above the surface.

All quantities are dimensionless: frequencies in units of omega_sp, the
in-plane wave-vector as w = k_x z_a, and the drift ratio s = V/Z, so that a
mode w seen at moving-frame frequency xi is Doppler shifted to xi + w s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .material import Drude, SurfaceModel
from .orientation import AngularFactors, angular_factors, kernel_K, w2_kernel
from .params import SystemParams
from .quadrature import IntegrationError, quad

# kernel e^{-2|w|} is below e^{-80} past this point
W_CUTOFF = 40.0
# fixed interior breakpoints that keep panels commensurate with the kernel decay
SKELETON = (-W_CUTOFF, -15.0, -6.0, -2.0, -0.5, 0.0, 0.5, 2.0, 6.0, 15.0, W_CUTOFF)

INNER_REL_TOL = 1e-9
_TWO_PI = 2.0 * math.pi
_SIX_PI = 6.0 * math.pi


@dataclass(frozen=True)
class ResponseContext:
    """Everything the spectral functions need: parameters, surface, angular factors, s."""

    params: SystemParams
    model: SurfaceModel
    factors: AngularFactors
    s: float = 0.0

    def __post_init__(self):
        if not (self.s >= 0 and math.isfinite(self.s)):
            raise ValueError(f"drift ratio s must be >= 0, got {self.s!r}")

    @classmethod
    def from_params(cls, params: SystemParams, model: SurfaceModel | None = None,
                    V: float = 0.0) -> "ResponseContext":
        model = Drude(params.eta) if model is None else model
        return cls(params, model, angular_factors(params.orientation), V / params.Z)

    def at_velocity(self, V: float) -> "ResponseContext":
        if not V >= 0:
            raise ValueError(f"V must be >= 0, got {V!r}")
        return replace(self, s=V / self.params.Z)

    @property
    def V(self) -> float:
        return self.s * self.params.Z

    @property
    def static_green(self) -> float:
        """G(0, 0)/r0 = A_zero / (24 pi)."""
        return self.factors.A_zero / (24.0 * math.pi)


def _breakpoints(lo: float, hi: float, extra=()) -> list[float]:
    pts = [p for p in SKELETON if lo < p < hi]
    pts += [p for p in extra if lo < p < hi and abs(p) < W_CUTOFF]
    return sorted(set(pts))


def g_kernel(ctx: ResponseContext, w, xi):
    """g(w, xi) = r(xi) w^2 K(w) / (6 pi)."""
    w = np.asarray(w, dtype=float)
    return ctx.model.reflection(xi) * w**2 * kernel_K(w, ctx.factors) / _SIX_PI


@dataclass(frozen=True)
class GreenPieces:
    """Split of G(xi, s) at the Heaviside edge w = -xi/s.

    ``lower`` integrates modes whose Doppler-shifted frequency is negative,
    ``upper`` those with positive shifted frequency, so ``G = lower + upper``
    and ``G^theta = upper``.
    """

    lower: complex
    upper: complex
    error: float
    rel_error: float

    @property
    def total(self) -> complex:
        return self.lower + self.upper


def green_pieces(ctx: ResponseContext, xi: float, rel_tol: float = INNER_REL_TOL) -> GreenPieces:
    xi = float(xi)
    s = ctx.s
    f = ctx.factors
    model = ctx.model
    if s == 0.0:
        g = complex(model.reflection(xi)) * ctx.static_green
        if xi > 0:
            return GreenPieces(0j, g, 0.0, 0.0)
        if xi < 0:
            return GreenPieces(g, 0j, 0.0, 0.0)
        half = 0.5 * g
        return GreenPieces(half, half, 0.0, 0.0)

    edge = -xi / s
    extra = [edge]
    for x_res in getattr(model, "resonances", ()):
        extra += [(x_res - xi) / s, (-x_res - xi) / s]

    def integrand(w):
        r = model.reflection(xi + w * s)
        k = w2_kernel(w, f) / (_SIX_PI * _TWO_PI)
        return np.stack([r.real * k, r.imag * k], axis=1)

    # Re G may cross zero (near the plasmon); give it an absolute floor. Each
    # piece has single-signed Im parts, which are held to rel_tol throughout.
    re_floor = rel_tol * 1e-3 * ctx.static_green * max(1.0, abs(complex(model.reflection(xi))))
    pieces = []
    err = 0.0
    rel = 0.0
    for lo, hi in ((-math.inf, edge), (edge, math.inf)):
        res = quad(integrand, lo, hi, _breakpoints(lo, hi, extra), rel_tol=rel_tol,
                   abs_tol=(re_floor, 1e-300), scale=0.5)
        if not res.converged:
            raise IntegrationError(f"G({xi}, s={s}) piece [{lo}, {hi}] did not converge", res)
        pieces.append(complex(res.value[0], res.value[1]))
        err += float(np.hypot(*res.error_estimate))
        # relative error of the imaginary part, the one that feeds the spectra
        if res.value[1] != 0:
            rel = max(rel, float(res.error_estimate[1] / abs(res.value[1])))
    return GreenPieces(pieces[0], pieces[1], err, rel)


def bigG(ctx: ResponseContext, xi: float, with_theta: bool = False) -> complex:
    """G(xi, s), or G^theta(xi, s) when ``with_theta``."""
    p = green_pieces(ctx, xi)
    return p.upper if with_theta else p.total


def _alpha_from_green(ctx: ResponseContext, xi: float, green: complex) -> complex:
    p = ctx.params
    denom = 1.0 - (xi / p.xi_a) ** 2 - p.coupling * green
    if abs(denom) < 1e-14:
        raise ZeroDivisionError(f"polarizability resonance denominator vanishes at xi={xi}")
    return p.alpha_sp / denom


def polarizability(ctx: ResponseContext, xi: float) -> complex:
    """alpha(xi; V) = alpha_sp / [1 - (xi/xi_a)^2 - (alpha_sp/Z^3) G(xi, s)]."""
    return _alpha_from_green(ctx, xi, green_pieces(ctx, xi).total)


def _im_green_slope_at_zero(ctx: ResponseContext) -> float:
    """d Im G / d xi at xi = 0."""
    if ctx.s == 0.0:
        return float(ctx.model.reflection_im_slope(0.0)) * ctx.static_green
    s = ctx.s
    f = ctx.factors
    model = ctx.model
    extra = []
    for x_res in getattr(model, "resonances", ()):
        extra += [x_res / s, -x_res / s]

    def integrand(w):
        return model.reflection_im_slope(w * s) * w2_kernel(w, f) / (_SIX_PI * _TWO_PI)

    res = quad(integrand, -math.inf, math.inf, _breakpoints(-math.inf, math.inf, extra),
               rel_tol=INNER_REL_TOL, scale=0.5)
    return float(res.require("dImG/dxi").value)


def damping_shift(ctx: ResponseContext, xi: float) -> tuple[float, float]:
    """Surface-induced shift Delta (units omega_sp^2) and damping gamma (units omega_sp).

    At xi = 0 the damping is returned as its finite limit, fixed by the slope
    of Im G at zero frequency.
    """
    p = ctx.params
    scale = p.xi_a**2 * p.coupling
    green = green_pieces(ctx, xi).total
    delta = scale * green.real
    if xi == 0:
        gamma = scale * _im_green_slope_at_zero(ctx)
    else:
        gamma = scale * green.imag / xi
    return delta, gamma


def power_spectrum(ctx: ResponseContext, xi: float) -> float:
    """Dipole power spectrum in units of hbar/pi: |alpha|^2 Im G^theta / Z^3.

    At V = 0 this is theta(xi) Im alpha(xi), the zero-temperature FDT form.
    """
    p = green_pieces(ctx, xi)
    alpha = _alpha_from_green(ctx, xi, p.total)
    return abs(alpha) ** 2 * p.upper.imag / ctx.params.Z**3


def spectrum_parts(ctx: ResponseContext, xi: float) -> dict[str, float]:
    """Full spectrum with its equilibrium (theta Im alpha) and J parts."""
    p = green_pieces(ctx, xi)
    alpha = _alpha_from_green(ctx, xi, p.total)
    a2 = abs(alpha) ** 2 / ctx.params.Z**3
    if xi > 0:
        j = -p.lower.imag
        lte = p.total.imag
    elif xi < 0:
        j = p.upper.imag
        lte = 0.0
    else:
        # theta(0) = 0: the xi = 0 line belongs to the J part
        j = p.upper.imag
        lte = 0.0
    return {
        "S": a2 * p.upper.imag,
        "S_lte": a2 * lte,
        "J": a2 * j,
        "alpha_I": alpha.imag,
    }
