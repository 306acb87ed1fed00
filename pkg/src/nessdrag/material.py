"""Quasi-static TM reflection coefficient of the surface, frequencies in omega_sp units."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class Drude:
    """Drude metal, r = (eps - 1)/(eps + 1) reduced to 1/(1 - xi^2 - i eta xi)."""

    eta: float

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be > 0, got {self.eta!r}")

    @property
    def r0(self) -> float:
        return 1.0

    # surface-plasmon poles sit near xi = +-1
    resonances = (1.0,)

    def reflection(self, xi):
        xi = np.asarray(xi, dtype=float)
        return 1.0 / (1.0 - xi * xi - 1j * self.eta * xi)

    def reflection_im(self, xi):
        xi = np.asarray(xi, dtype=float)
        d = (1.0 - xi * xi) ** 2 + (self.eta * xi) ** 2
        return self.eta * xi / d

    def reflection_im_slope(self, xi):
        xi = np.asarray(xi, dtype=float)
        one = 1.0 - xi * xi
        d = one**2 + (self.eta * xi) ** 2
        dd = -4.0 * xi * one + 2.0 * self.eta**2 * xi
        return self.eta * (d - xi * dd) / (d * d)


@dataclass(frozen=True)
class LinearOhmic:
    """Low-frequency Ohmic expansion r = r0 + i eta xi, kept at all xi."""

    r0: float
    eta: float

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be > 0, got {self.eta!r}")
        if not 0 < self.r0 <= 1:
            raise ValueError(f"r0 must lie in (0, 1], got {self.r0!r}")

    resonances = ()

    def reflection(self, xi):
        xi = np.asarray(xi, dtype=float)
        return self.r0 + 1j * self.eta * xi

    def reflection_im(self, xi):
        return self.eta * np.asarray(xi, dtype=float)

    def reflection_im_slope(self, xi):
        return np.full_like(np.asarray(xi, dtype=float), self.eta)


SurfaceModel = Union[Drude, LinearOhmic]


def reflection(model: SurfaceModel, xi):
    return model.reflection(xi)


def reflection_im(model: SurfaceModel, xi):
    return model.reflection_im(xi)


def make_model(name: str, eta: float, r0: float = 1.0) -> SurfaceModel:
    name = name.strip().lower()
    if name == "drude":
        return Drude(eta)
    if name == "ohmic":
        return LinearOhmic(r0=r0, eta=eta)
    raise ValueError(f"unknown material {name!r} (expected 'drude' or 'ohmic')")
