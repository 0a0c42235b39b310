"""Numerics for rearrangement-invariant spaces on [0, 1] and the Cesàro operator."""

from .cesaro import cesaro, cesaro_space_norm, copson, in_cesaro_space
from .fncore import (Divergent, Finite, Hyperbolic, LogRecip, Power, Sampled, ShiftedRecip,
                     Step, Unknown, distribution, integrate, rearrange)
from .rispaces import LogPhi, Lorentz, Lp, Marcinkiewicz, PowerPhi, norm
from .vmeasure import IntervalSet, density, density_norm, finite_variation, variation

__version__ = "0.1.0"

__all__ = [
    "cesaro", "cesaro_space_norm", "copson", "in_cesaro_space", "Divergent", "Finite",
    "Hyperbolic", "LogRecip", "Power", "Sampled", "ShiftedRecip", "Step", "Unknown",
    "distribution", "integrate", "rearrange", "LogPhi", "Lorentz", "Lp", "Marcinkiewicz",
    "PowerPhi", "norm", "IntervalSet", "density", "density_norm", "finite_variation",
    "variation",
]
