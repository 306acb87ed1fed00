"""Quantum friction on a dipole moving above a planar Ohmic surface.

The force is computed in the exact non-equilibrium steady state and in the
local-thermal-equilibrium approximation, alongside their closed-form
low- and high-velocity asymptotes.
"""

from .friction import ForceResult, force_full, force_j, force_lte, forces, sweep
from .params import SIInputs, SystemParams, reference_params, from_si
from .response import ResponseContext

__all__ = [
    "ForceResult", "ResponseContext", "SIInputs", "SystemParams",
    "reference_params", "force_full", "force_j", "force_lte", "forces", "from_si", "sweep",
]
__version__ = "0.1.0"
