"""Norms of functions in the catalog spaces.

Every norm first settles divergence from the growth class of ``f*`` at 0
(``Divergent(route="class")``). Finite values come from ``f*`` directly when
its rearrangement is exact, and otherwise from the distribution function
(layer-cake formulas), which avoids the resolution loss of a sampled ``f*``.
"""

from __future__ import annotations

import math

import numpy as np

from ..fncore.asym import Asym
from ..fncore.expr import FunctionExpr, NoClosedForm, Sampled, Step
from ..fncore.extreal import Divergent, ExtReal, Finite, Unknown
from ..fncore.ops import distribution_many, integrate, rearrange, rearrange_values
from ..fncore.points import Points
from ..fncore.quadrature import quad
from .phi import QuasiConcave
from .spaces import Lorentz, Lp, Marcinkiewicz, RISpace

SUP_POINTS = 256
SUP_T_MIN = 1e-8
SUP_STABLE = 0.01
SUP_CEILING = 1e6


def _exact_rearrangement(f: FunctionExpr):
    fs = rearrange(f)
    if isinstance(fs, Sampled) and not isinstance(f, Sampled):
        return None
    return fs


# Lp ---------------------------------------------------------------------------

def _lp_norm(p: float, f: FunctionExpr, tol: float) -> ExtReal:
    c = f.singular_class()
    if math.isinf(p):
        if not c.bounded():
            return Divergent("class")
        fs = rearrange(f)
        if isinstance(fs, Step):
            return Finite(max(fs.values), 0.0)
        if isinstance(fs, Sampled):
            return Finite(max(fs.values), max(fs.spread) if fs.spread else 0.0, True)
        v = float(fs.eval(Points.near0(np.array([700.0])))[0])
        return Finite(v, 1e-12 * v, f.approximate)
    if not (c ** p).integrable():
        return Divergent("class")
    if isinstance(f, Step):
        v = float(np.dot(np.asarray(f.values) ** p, f.lengths))
        return Finite(v ** (1 / p), 0.0)
    if isinstance(f, Sampled):
        v = np.asarray(f.values)
        s = np.asarray(f.spread)
        w = np.diff(f.grid)
        total = float(np.dot(v ** p, w))
        err = float(np.dot(p * (v + s) ** (p - 1) * s, w))
        root = total ** (1 / p)
        return Finite(root, err * root ** (1 - p) / p if total > 0 else err ** (1 / p), True)
    if p == 1:
        return integrate(f, 0.0, 1.0, tol)

    def integrand(pts):
        fx = f.eval_x(pts)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            val = np.exp(p * np.log(fx) + (p - 1) * pts.lx)
        return np.where(fx > 0, val, 0.0) * pts.jac_over_x()

    r = quad(integrand, 0.0, 1.0, tol, breaks=f.breaks(), weighted=True)
    total, err, status = r.scalar()
    if status != "ok":
        return Unknown(f"quadrature {status}")
    root = total ** (1 / p)
    return Finite(root, err * root ** (1 - p) / p if total > 0 else 0.0, f.approximate)


# Lorentz ----------------------------------------------------------------------

def _layer_cake(weight, f: FunctionExpr, tol: float, batch: int = 1):
    """``int_0^inf weight(lambda_f(tau)) dtau`` split at ``tau = 1``."""

    def low(pts):
        return weight(distribution_many(f, pts.x)) * pts.jac

    def high(pts):
        with np.errstate(over="ignore"):
            tau = np.exp(pts.lx)
        lam = distribution_many(f, np.minimum(tau, 1e308))
        lam = np.where(np.isinf(tau), 0.0, lam)
        w = weight(lam)
        with np.errstate(over="ignore", invalid="ignore"):
            val = w * tau * pts.jac_over_x()
        return np.where(w != 0, val, 0.0)

    a = quad(low, 0.0, 1.0, tol, batch=batch, weighted=True)
    b = quad(high, 0.0, 1.0, tol, batch=batch, weighted=True)
    status = [x if x != "ok" else y for x, y in zip(a.status, b.status)]
    return a.value + b.value, a.err + b.err, status


def _lorentz_norm(phi: QuasiConcave, f: FunctionExpr, tol: float) -> ExtReal:
    c = f.singular_class()
    if not (c * phi.deriv_class()).integrable():
        return Divergent("class")
    fs = _exact_rearrangement(f)
    if isinstance(fs, Step):
        b = np.asarray(fs.breaks_)
        dphi = np.diff(phi.eval(b))
        return Finite(float(np.dot(fs.values, dphi)), 0.0)
    if isinstance(fs, Sampled):
        g = np.asarray(fs.grid)
        dphi = np.diff(phi.eval(g))
        value = float(np.dot(fs.values, dphi))
        err = float(np.dot(fs.spread, dphi))
        if g[0] > 0 and fs.tail0 is not None:
            r = quad(lambda p: fs.eval(p) * phi.tderiv_log(p.lx) * p.jac_over_x(),
                     0.0, float(g[0]), tol, weighted=True)
            value += float(r.value[0])
            err += float(r.value[0]) + float(r.err[0])
        return Finite(value, err, True)
    if fs is not None:
        r = quad(lambda p: fs.eval(p) * phi.tderiv_log(p.lx) * p.jac_over_x(),
                 0.0, 1.0, tol, breaks=fs.breaks(), weighted=True)
        value, err, status = r.scalar()
        if status != "ok":
            return Unknown(f"quadrature {status}")
        return Finite(value, err, f.approximate)
    value, err, status = _layer_cake(lambda lam: phi.eval(lam), f, tol)
    if status[0] != "ok":
        return Unknown(f"quadrature {status[0]}")
    return Finite(float(value[0]), float(err[0]), f.approximate)


# Marcinkiewicz ----------------------------------------------------------------

def grid_sup(h, L_extra=(), n: int = SUP_POINTS, t_min: float = SUP_T_MIN, polish: bool = True):
    """Sup of ``h(L)`` over ``t = e^-L`` in ``[t_min, 1]``: grid, refinement, polish.

    Returns ``(value, err, stable)``; ``stable`` means the refined grid moved
    the sup by less than 1%.
    """
    L_max = -math.log(t_min)
    extra = np.asarray([L for L in L_extra if 0.0 <= L <= L_max], dtype=float)

    def best(m):
        Ls = np.unique(np.concatenate([np.linspace(0.0, L_max, m), extra]))
        v = np.asarray(h(Ls), dtype=float)
        k = int(np.nanargmax(v))
        return float(v[k]), Ls, k

    v1, _, _ = best(n)
    v2, Ls, k = best(2 * n)
    a = Ls[max(k - 1, 0)]
    b = Ls[min(k + 1, Ls.size - 1)]
    g = (math.sqrt(5) - 1) / 2
    x1, x2 = b - g * (b - a), a + g * (b - a)
    f1, f2 = float(h(np.array([x1]))[0]), float(h(np.array([x2]))[0])
    for _ in range(60 if polish else 0):
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - g * (b - a)
            f1 = float(h(np.array([x1]))[0])
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (b - a)
            f2 = float(h(np.array([x2]))[0])
    v3 = max(v2, f1, f2)
    stable = math.isfinite(v2) and abs(v2 - v1) <= SUP_STABLE * abs(v2)
    return v3, abs(v3 - v1), stable


def _cumulative_batch(f: FunctionExpr, ts: np.ndarray, tol: float):
    """``int_0^t f*`` for many ``t`` at once via ``int_0^inf min(t, lambda(tau)) dtau``."""
    value, err, status = _layer_cake(lambda lam: np.minimum(ts[:, None], lam[None, :]),
                                     f, tol, batch=ts.size)
    return value, err, status


def _marcinkiewicz_norm(phi: QuasiConcave, equiv: bool, f: FunctionExpr, tol: float) -> ExtReal:
    c = f.singular_class()
    if not c.integrable():
        return Divergent("class")
    if equiv:
        if not (phi.klass() * c).bounded():
            return Divergent("class")
    elif not (phi.klass() * Asym(-1.0, 0.0) * c.primitive()).bounded():
        return Divergent("class")
    fs = _exact_rearrangement(f)
    extra = []
    if fs is not None:
        with np.errstate(divide="ignore"):
            Lb = -np.log(np.asarray(fs.breaks()))
            extra = list(Lb) + list(Lb + 1e-12)
    inner_err = [0.0]

    if equiv:
        def h(L):
            vals = (fs.eval(Points.near0(L)) if fs is not None
                    else rearrange_values(f, np.exp(-L)))
            return phi.eval_log(L) * vals
    closed = fs is not None
    if not equiv:
        if closed:
            try:
                fs.primitive(Points.near0(np.array([1.0])))
            except NoClosedForm:
                closed = False

        def h(L):
            if closed:
                F = fs.primitive(Points.near0(L))
            else:
                F, e, _ = _cumulative_batch(f if fs is None else fs, np.exp(-L), tol)
                inner_err[0] = max(inner_err[0], float(np.max(e * np.exp(phi.log_eval(L) + L))))
            with np.errstate(over="ignore", invalid="ignore"):
                return np.exp(phi.log_eval(L) + L) * F

    v, err, stable = grid_sup(h, extra, polish=equiv or closed)
    if not stable:
        return Unknown("sup probe not stabilized under refinement")
    err += inner_err[0]
    if isinstance(fs, Sampled):
        err += _sampled_sup_slack(fs, phi, equiv)
    return Finite(v, err, f.approximate or (fs is not None and fs.approximate))


def _sampled_sup_slack(fs: Sampled, phi: QuasiConcave, equiv: bool) -> float:
    if equiv:
        g = np.asarray(fs.grid[1:])
        return float(np.max(phi.eval(g) * np.asarray(fs.spread)))
    g = np.asarray(fs.grid)
    cum = np.cumsum(np.asarray(fs.spread) * np.diff(g))
    t = g[1:]
    return float(np.max(phi.eval(t) / t * cum))


def norm(X: RISpace, f: FunctionExpr, tol: float = 1e-8) -> ExtReal:
    """``||f||_X`` computed through ``f*``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    if isinstance(f, Sampled) and f.divergent:
        return Divergent("marker")
    if isinstance(X, Lp):
        return _lp_norm(X.p, f, tol)
    if isinstance(X, Lorentz):
        return _lorentz_norm(X.phi, f, tol)
    if isinstance(X, Marcinkiewicz):
        return _marcinkiewicz_norm(X.phi, X.use_equiv_norm, f, tol)
    raise TypeError(f"unsupported space {X!r}")
