"""Quantum-friction force on the moving dipole and its LTE / J decomposition.

With u = w - nu the double integral over (nu, w) factorises: the polarizability
and the spectral factor depend on u only, so

    F/F0 = (4/alpha_sp) (V/Z^8) int du/(2 pi) |alpha(u s)|^2 S(u s) H(u),
    H(u) = int_0^inf dnu (u + nu)^3 K(u + nu) Im r(nu s) / (6 pi),

where S is Im G^theta (full), theta(xi) Im G (LTE) or the J kernel. Values are
returned as |F|/|F0|, positive for drag.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bessel import k0_k2
from .quadrature import IntegrationError, quad
from .response import (
    INNER_REL_TOL,
    SKELETON,
    W_CUTOFF,
    ResponseContext,
    _alpha_from_green,
    _breakpoints,
    green_pieces,
)

MODES = ("full", "lte", "j")
OUTER_REL_TOL = 1e-7
# resonance ladder offsets, in units of the Lorentzian half-width
_LADDER = tuple(4.0**k for k in range(0, 12))
_SIX_PI = 6.0 * math.pi


@dataclass(frozen=True)
class ForceResult:
    f_over_f0: float
    error_estimate: float
    mode: str
    V: float
    converged: bool = True
    evaluations: int = 0


class ForceConvergenceError(IntegrationError):
    def __init__(self, message: str, partial: dict[str, ForceResult]):
        super().__init__(message)
        self.partial = partial


def _w3_kernel(w: np.ndarray, ctx: ResponseContext) -> np.ndarray:
    f = ctx.factors
    out = np.zeros_like(w)
    nz = w != 0
    a, b = k0_k2(2.0 * np.abs(w[nz]))
    out[nz] = w[nz] ** 3 * (f.A0 * a + f.A2 * b)
    return out


def transfer_weight(ctx: ResponseContext, u: float, rel_tol: float = INNER_REL_TOL):
    """H(u) = int_u^inf dw w^3 K(w) Im r((w - u) s) / (6 pi); returns (value, abs_error).

    For u < 0 the odd kernel makes the integrand change sign, so the tolerance
    is measured against int |integrand|.
    """
    s = ctx.s
    model = ctx.model
    extra = [u + x_res / s for x_res in getattr(model, "resonances", ())]

    def integrand(w):
        return _w3_kernel(w, ctx) * model.reflection_im((w - u) * s) / _SIX_PI

    floor = rel_tol * 1e-6 * ctx.params.eta * s
    res = quad(integrand, u, math.inf, _breakpoints(u, math.inf, extra), rel_tol=rel_tol,
               abs_tol=floor, scale=0.5, l1_relative=True)
    if not res.converged:
        raise IntegrationError(f"H({u}) did not converge", res)
    return float(res.value), float(res.error_estimate)


def resonance(ctx: ResponseContext) -> tuple[float, float]:
    """Location and Lorentzian half-width (in xi) of the dressed oscillator resonance."""
    p = ctx.params
    xi = p.xi_a
    for _ in range(6):
        g = green_pieces(ctx, xi).total
        xi = p.xi_a * math.sqrt(max(1.0 - p.coupling * g.real, 1e-12))
    g = green_pieces(ctx, xi).total
    width = p.coupling * abs(g.imag) * p.xi_a**2 / (2.0 * xi)
    return xi, width


def _outer_breakpoints(ctx: ResponseContext) -> list[float]:
    s = ctx.s
    pts = list(SKELETON)
    for x_res in getattr(ctx.model, "resonances", ()):
        pts += [x_res / s, -x_res / s]
    xi_r, width = resonance(ctx)
    u_r = xi_r / s
    du = width / s
    if u_r < 1.5 * W_CUTOFF:
        for sign in (1.0, -1.0):
            c = sign * u_r
            pts.append(c)
            for k in _LADDER:
                off = k * du
                if off > 0.5 * u_r:
                    break
                pts += [c - off, c + off]
    return sorted(set(p for p in pts if math.isfinite(p)))


def forces(ctx: ResponseContext, V: float, modes=MODES, *, rel_tol: float = OUTER_REL_TOL,
           inner_rel_tol: float = INNER_REL_TOL) -> dict[str, ForceResult]:
    """Evaluate the requested force modes at velocity ``V`` on one shared panel set."""
    if not (V > 0 and math.isfinite(V)):
        raise ValueError(f"V must be > 0, got {V!r}")
    modes = tuple(modes)
    bad = [m for m in modes if m not in MODES]
    if bad or not modes:
        raise ValueError(f"modes must be a non-empty subset of {MODES}, got {modes}")
    ctx = ctx.at_velocity(V)
    p = ctx.params
    s = ctx.s
    n = len(modes)

    def point(u: float) -> np.ndarray:
        xi = u * s
        gp = green_pieces(ctx, xi, inner_rel_tol)
        h, h_err = transfer_weight(ctx, u, inner_rel_tol)
        a2 = abs(_alpha_from_green(ctx, xi, gp.total)) ** 2
        out = np.empty(2 * n)
        for i, m in enumerate(modes):
            if m == "full":
                spec = gp.upper.imag
            elif m == "lte":
                spec = gp.total.imag if xi > 0 else 0.0
            else:
                spec = -gp.lower.imag if xi > 0 else gp.upper.imag
            out[i] = a2 * spec / (2.0 * math.pi)
        # pointwise inner-quadrature uncertainty, integrated alongside the values
        out[n:] = np.abs(out[:n]) * (abs(h) * min(1.0, 2.0 * gp.rel_error) + h_err)
        out[:n] *= h
        return out

    def integrand(u):
        return np.array([point(x) for x in u])

    abs_tol = [1e-300] * n + [math.inf] * n
    res = quad(integrand, -math.inf, math.inf, _outer_breakpoints(ctx), rel_tol=rel_tol,
               abs_tol=abs_tol, scale=1.0, max_panels=4000)
    prefactor = 4.0 * V / (p.alpha_sp * p.Z**8)
    values = np.atleast_1d(res.value)[:n] * prefactor
    errors = np.atleast_1d(res.error_estimate)[:n] * prefactor
    inner = np.atleast_1d(res.value)[n:] * prefactor
    out = {}
    for i, m in enumerate(modes):
        err = math.hypot(errors[i], inner[i])
        out[m] = ForceResult(float(values[i]), float(err), m, V, res.converged, res.evaluations)
    if not res.converged:
        raise ForceConvergenceError(f"force integral at V={V} did not converge", out)
    return out


def force_full(ctx: ResponseContext, V: float, **kw) -> ForceResult:
    return forces(ctx, V, ("full",), **kw)["full"]


def force_lte(ctx: ResponseContext, V: float, **kw) -> ForceResult:
    """Force with the dipole spectrum truncated to its equilibrium form theta(xi) Im alpha."""
    return forces(ctx, V, ("lte",), **kw)["lte"]


def force_j(ctx: ResponseContext, V: float, **kw) -> ForceResult:
    """Non-equilibrium part, from the [theta(xi + w s) - theta(xi)] kernel directly."""
    return forces(ctx, V, ("j",), **kw)["j"]


@dataclass(frozen=True)
class SweepRow:
    V: float
    full: float = math.nan
    lte: float = math.nan
    j: float = math.nan
    err_full: float = math.nan
    asym_low: float = math.nan
    asym_high: float = math.nan
    error: str | None = None

    @property
    def rel_diff_lte(self) -> float:
        return (self.full - self.lte) / self.lte

    @property
    def rel_diff_full(self) -> float:
        return (self.full - self.lte) / self.full


def _sweep_row(args) -> SweepRow:
    from . import asymptotics

    ctx, V, modes = args
    low = asymptotics.total_low_v(ctx, V)
    high = asymptotics.high_v(ctx, V)
    try:
        res = forces(ctx, V, modes)
    except (IntegrationError, ZeroDivisionError, ArithmeticError) as exc:
        partial = getattr(exc, "partial", {})
        vals = {m: r.f_over_f0 for m, r in partial.items()}
        return SweepRow(V, vals.get("full", math.nan), vals.get("lte", math.nan),
                        vals.get("j", math.nan), asym_low=low, asym_high=high, error=str(exc))
    get = lambda m: res[m].f_over_f0 if m in res else math.nan  # noqa: E731
    err = res["full"].error_estimate if "full" in res else math.nan
    return SweepRow(V, get("full"), get("lte"), get("j"), err, low, high)


def default_workers() -> int:
    env = os.environ.get("NESSDRAG_THREADS")
    n = os.cpu_count() or 1
    if env:
        n = min(n, max(1, int(env)))
    return n


def sweep(ctx: ResponseContext, V_grid, modes=MODES, workers: int | None = None) -> list[SweepRow]:
    """Evaluate every velocity of ``V_grid``; rows keep the grid order.

    A row whose integral fails records the error and the sweep carries on.
    """
    grid = [float(v) for v in V_grid]
    if any(v <= 0 for v in grid):
        raise ValueError("all velocities must be > 0")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("velocity grid must be sorted ascending")
    if not grid:
        return []
    workers = default_workers() if workers is None else workers
    jobs = [(ctx, v, tuple(modes)) for v in grid]
    if workers <= 1 or len(grid) == 1:
        return [_sweep_row(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_row, jobs))
