"""Nonnegative functions on [0, 1]: evaluation, integration, rearrangement."""

from .asym import Asym, harshest
from .expr import (CesaroImage, CopsonImage, FunctionExpr, Hyperbolic, LogRecip, Mirror,
                   NoClosedForm, Power, Restrict, Sampled, Scale, ShiftedRecip, Step, Sum,
                   const, mirrored_power)
from .extreal import Divergent, ExtReal, Finite, Unknown, agree, as_float, is_finite, to_dict
from .ops import (cumulative_rearranged, distribution, distribution_many, integrate,
                  integrate_callable, primitive_values, rearrange, rearrange_values)
from .points import Points
from .quadrature import quad

__all__ = [
    "Asym", "harshest", "CesaroImage", "CopsonImage", "FunctionExpr", "Hyperbolic",
    "LogRecip", "Mirror", "NoClosedForm", "Power", "Restrict", "Sampled", "Scale",
    "ShiftedRecip", "Step", "Sum", "const", "mirrored_power", "Divergent", "ExtReal",
    "Finite", "Unknown", "agree", "as_float", "is_finite", "to_dict",
    "cumulative_rearranged", "distribution", "distribution_many", "integrate",
    "integrate_callable", "primitive_values", "rearrange", "rearrange_values", "Points",
    "quad",
]
