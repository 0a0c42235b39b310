"""The Cesàro operator, its Copson dual and the Cesàro-space norm."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .fncore.expr import (CesaroImage, CopsonImage, FunctionExpr, Hyperbolic, LogRecip,
                          NoClosedForm, Power, Sampled, Scale, Step, Sum)
from .fncore.extreal import Divergent, ExtReal, Finite, Unknown
from .fncore.ops import integrate, primitive_values, rearrangement_grid
from .fncore.points import Points
from .rispaces.norms import norm
from .rispaces.spaces import RISpace

_PROBE = Points.at(np.array([0.5]))


def is_divergent(f: FunctionExpr) -> bool:
    return isinstance(f, Sampled) and f.divergent


def _has(method, f: FunctionExpr) -> bool:
    try:
        getattr(f, method)(_PROBE)
        return True
    except NoClosedForm:
        return False


def _cesaro_step(f: Step) -> FunctionExpr:
    b = np.asarray(f.breaks_)
    v = np.asarray(f.values)
    S = np.concatenate([[0.0], np.cumsum(v * np.diff(b))])
    pieces = [Hyperbolic(float(v[k]), float(S[k] - v[k] * b[k]), float(b[k]), float(b[k + 1]))
              for k in range(v.size)]
    return pieces[0] if len(pieces) == 1 else Sum(tuple(pieces))


def _sampled_image(values_at) -> Sampled:
    grid = rearrangement_grid()
    pts = Points.at(grid)
    fv = values_at(pts)
    vals = 0.5 * (fv[:-1] + fv[1:])
    spread = 0.5 * np.abs(fv[:-1] - fv[1:])
    return Sampled(tuple(grid), tuple(vals), tuple(spread), True)


def cesaro(f: FunctionExpr) -> FunctionExpr:
    """``C f(x) = (1/x) int_0^x f``, exact on the catalog.

    Steps become Hyperbolic pieces, ``c t^a`` becomes ``c/(a+1) t^a``, sums and
    scalings are mapped term by term, and anything with a closed primitive is
    wrapped lazily. A function that is not integrable at 0 has ``C f = inf``
    everywhere; that is returned as the divergent marker.
    """
    if is_divergent(f) or not f.blowup0().integrable():
        return Sampled.divergent_marker()
    if isinstance(f, Step):
        return _cesaro_step(f)
    if isinstance(f, Power):
        return Power(f.c / (f.a + 1), f.a)
    if isinstance(f, Sum):
        return Sum(tuple(cesaro(t) for t in f.terms))
    if isinstance(f, Scale):
        return Scale(f.k, cesaro(f.inner))
    if _has("primitive", f):
        return CesaroImage(f)

    def mean(pts):
        return primitive_values(f, pts) / pts.x

    return _sampled_image(mean)


def copson(f: FunctionExpr) -> FunctionExpr:
    """``C* f(x) = int_x^1 f(t)/t dt``."""
    if is_divergent(f) or not f.blowup1().integrable():
        return Sampled.divergent_marker()
    if isinstance(f, Step) and len(f.values) == 1:
        return LogRecip(f.values[0])
    if isinstance(f, Power) and f.a == 0:
        return LogRecip(f.c)
    if isinstance(f, Sum):
        return Sum(tuple(copson(t) for t in f.terms))
    if isinstance(f, Scale):
        return Scale(f.k, copson(f.inner))
    if _has("copson_primitive", f):
        return CopsonImage(f)

    def tail(pts):
        out = np.empty(pts.x.shape)
        for i, x in enumerate(pts.x):
            r = integrate(Sum((f,)), float(x), 1.0) if x < 1 else Finite(0.0)
            out[i] = r.value if isinstance(r, Finite) else np.inf
        return out

    return _sampled_image(tail)


def cesaro_space_norm(X: RISpace, f: FunctionExpr, tol: float = 1e-8) -> ExtReal:
    """``||f||_[C,X] = ||C f||_X``."""
    g = cesaro(f)
    if is_divergent(g):
        return Divergent("marker")
    return norm(X, g, tol)


def in_cesaro_space(X: RISpace, f: FunctionExpr, tol: float = 1e-8) -> Optional[bool]:
    """Membership ``f in [C, X]``: True, False, or None when undecided."""
    r = cesaro_space_norm(X, f, tol)
    if isinstance(r, Unknown):
        return None
    return not isinstance(r, Divergent)
