"""Dipole-orientation algebra: angular factors, the Bessel kernel and sphere averages."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bessel import k0_k2


@dataclass(frozen=True)
class DerivedFactors:
    A_zero: float
    A_lte: float
    A_j: float


@dataclass(frozen=True)
class AngularFactors:
    """Weights of K0 and K2 in the k_y-integrated near-field kernel.

    Fields may be numpy arrays when built by :func:`sphere_average`.
    """

    A0: float
    A2: float

    @property
    def A_zero(self):
        return (self.A0 + 3.0 * self.A2) / 4.0

    @property
    def A_lte(self):
        return (self.A0 + 3.0 * self.A2) * (5.0 * self.A0 + 7.0 * self.A2) / 48.0

    @property
    def A_j(self):
        return ((3.0 * self.A0 + 5.0 * self.A2) / 8.0) ** 2

    def derived(self) -> DerivedFactors:
        return DerivedFactors(self.A_zero, self.A_lte, self.A_j)


def _factors_from_components(x, y):
    # sin^2(theta) cos^2(phi) = x^2, sin^2(theta) = x^2 + y^2
    A0 = 1.5 * (1.0 + x * x - 2.0 * y * y)
    A2 = 1.5 * (1.0 - x * x)
    return A0, A2


def angular_factors(direction) -> AngularFactors:
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,):
        raise ValueError("direction must be a 3-vector")
    norm = float(np.linalg.norm(d))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"direction must be a unit vector, |d| = {norm!r}")
    A0, A2 = _factors_from_components(d[0], d[1])
    return AngularFactors(float(A0), float(A2))


def angular_factors_from_angles(theta: float, phi: float) -> AngularFactors:
    st2 = math.sin(theta) ** 2
    cp2 = math.cos(phi) ** 2
    return AngularFactors(1.5 * (1.0 + (3.0 * cp2 - 2.0) * st2), 1.5 * (1.0 - cp2 * st2))


def kernel_K(w, f: AngularFactors):
    """A0 K0(2|w|) + A2 K2(2|w|); even in w, singular at w = 0."""
    w = np.asarray(w, dtype=float)
    if np.any(w == 0):
        raise ValueError("kernel_K diverges at w = 0")
    a, b = k0_k2(2.0 * np.abs(w))
    return f.A0 * a + f.A2 * b


def w2_kernel(w, f: AngularFactors):
    """w^2 K(w) with its finite limit A2/2 at w = 0."""
    w = np.asarray(w, dtype=float)
    x = 2.0 * np.abs(w)
    out = np.empty(w.shape)
    zero = x == 0
    nz = ~zero
    if np.any(nz):
        a, b = k0_k2(x[nz])
        out[nz] = w[nz] ** 2 * (f.A0 * a + f.A2 * b)
    out[zero] = 0.5 * f.A2
    return out


def bessel_moment(n: int, nu: int) -> float:
    """Closed form of int_0^inf w^n K_nu(2w) dw = Gamma((n+1-nu)/2) Gamma((n+1+nu)/2) / 4."""
    if nu not in (0, 2):
        raise ValueError("nu must be 0 or 2")
    if n < 0 or n + 1 - nu <= 0:
        raise ValueError(f"moment of w^{n} K_{nu}(2w) diverges")
    return math.gamma((n + 1 - nu) / 2) * math.gamma((n + 1 + nu) / 2) / 4.0


def sphere_average(f: Callable[[AngularFactors], np.ndarray], order: int = 32) -> float:
    """Average of ``f`` over dipole directions.

    Gauss-Legendre in cos(theta) (``order`` nodes) times a ``2 order``-point
    trapezoid in phi; exact for trigonometric polynomials of degree < 2 order.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    ct, wt = np.polynomial.legendre.leggauss(order)
    phi = 2.0 * np.pi * np.arange(2 * order) / (2 * order)
    CT, PHI = np.meshgrid(ct, phi, indexing="ij")
    ST = np.sqrt(1.0 - CT * CT)
    A0, A2 = _factors_from_components(ST * np.cos(PHI), ST * np.sin(PHI))
    values = np.broadcast_to(np.asarray(f(AngularFactors(A0, A2)), dtype=float), CT.shape)
    # (1/4pi) * int d(cos) dphi, with the phi-trapezoid weight 2pi/(2 order)
    return float(np.sum(wt[:, None] * values) / (2.0 * 2 * order))
