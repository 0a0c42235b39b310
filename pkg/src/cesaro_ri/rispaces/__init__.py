"""Fundamental functions, r.i. space descriptors and their norms."""

from .dilation import DilationIndices, dilation_indices
from .norms import grid_sup, norm
from .phi import (LogPhi, PowerPhi, QuasiConcave, RatioPsi, TablePhi, Validation,
                  check_concave, ratio_psi, validate_phi)
from .spaces import Lorentz, Lp, Marcinkiewicz, RISpace, associate, boyd_upper, fundamental

__all__ = [
    "DilationIndices", "dilation_indices", "grid_sup", "norm", "LogPhi", "PowerPhi",
    "QuasiConcave", "RatioPsi", "TablePhi", "Validation", "check_concave", "ratio_psi",
    "validate_phi", "Lorentz", "Lp", "Marcinkiewicz", "RISpace", "associate", "boyd_upper",
    "fundamental",
]
