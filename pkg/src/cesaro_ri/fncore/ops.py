"""Integration, distribution functions and decreasing rearrangements."""

from __future__ import annotations

import math

import numpy as np

from .asym import Asym
from .expr import (BOUNDED, FunctionExpr, Hyperbolic, Mirror, NoClosedForm, Restrict,
                   Sampled, Scale, ShiftedRecip, Step, Sum)
from .extreal import Divergent, ExtReal, Finite, Unknown
from .points import Points
from .quadrature import quad

REARRANGE_CELLS = 512
_BISECT_STEPS = 80
_U_MAX = 2000.0


def _check_interval(a: float, b: float, tol: float) -> None:
    if not (0.0 <= a <= b <= 1.0):
        raise ValueError(f"need 0 <= a <= b <= 1, got [{a}, {b}]")
    if not tol > 0:
        raise ValueError("tol must be positive")


def _sampled_integral(f: Sampled, a: float, b: float) -> Finite:
    ends = Points.at(np.array([max(a, 1e-320), b]))
    lo_val = 0.0 if a == 0 else float(f.primitive(ends)[0])
    value = float(f.primitive(ends)[1]) - lo_val
    g = np.asarray(f.grid)
    width = np.clip(np.minimum(g[1:], b) - np.maximum(g[:-1], a), 0.0, None)
    err = float(np.dot(np.asarray(f.spread), width))
    if a < g[0]:
        err += f._tail_mass()
    return Finite(value, err, True)


def integrate(f: FunctionExpr, a: float = 0.0, b: float = 1.0, tol: float = 1e-10) -> ExtReal:
    """``int_a^b f`` with endpoint singularities handled by class and graded mesh."""
    _check_interval(a, b, tol)
    if a == b:
        return Finite(0.0, 0.0)
    if isinstance(f, Sampled) and f.divergent:
        return Divergent("marker")
    if a == 0.0 and not f.blowup0().integrable():
        return Divergent("class")
    if b == 1.0 and not f.blowup1().integrable():
        return Divergent("class")
    if isinstance(f, Step):
        v = f.primitive(Points.at(np.array([a, b])))
        return Finite(float(v[1] - v[0]), 0.0)
    if isinstance(f, Sampled):
        return _sampled_integral(f, a, b)
    r = quad(lambda p: f.eval_x(p) * p.jac_over_x(), a, b, tol,
             breaks=f.breaks(), weighted=True)
    value, err, status = r.scalar()
    if status == "ok":
        return Finite(max(value, 0.0), err, f.approximate)
    return Unknown(f"quadrature {status}")


def integrate_callable(fn, a: float, b: float, tol: float = 1e-10, breaks=()) -> ExtReal:
    """Integrate a bare callable of ``Points``; divergence via the cutoff probe."""
    from .quadrature import divergence_probe, probe_truncations
    _check_interval(a, b, tol)
    r = quad(fn, a, b, tol, breaks=breaks)
    value, err, status = r.scalar()
    if status == "ok":
        return Finite(value, err)
    if a == 0.0:
        verdict = divergence_probe(probe_truncations(fn, b, tol, breaks), tol)
        if verdict == "divergent":
            return Divergent("probe")
    return Unknown(f"quadrature {status}")


# distribution -----------------------------------------------------------------

def _bisect(f: FunctionExpr, taus: np.ndarray, lo: float, hi: float, trend: int) -> Points:
    """Crossing point of a monotone piece by bisection in an endpoint-adapted coordinate."""
    n = taus.size
    if lo == 0.0 and trend < 0:
        make, s0, s1, high_true = Points.near0, -math.log(hi), _U_MAX, True
    elif hi == 1.0 and trend > 0:
        make, s0, s1, high_true = Points.near1, -math.log1p(-lo), _U_MAX, True
    else:
        make, s0, s1, high_true = Points.at, lo, hi, trend < 0
        high_true = not high_true
    a = np.full(n, s0)
    b = np.full(n, s1)
    for _ in range(_BISECT_STEPS):
        m = 0.5 * (a + b)
        above = f.eval(make(m)) > taus
        move_a = above != high_true
        a = np.where(move_a, m, a)
        b = np.where(move_a, b, m)
    return make(0.5 * (a + b))


def _sampled_piece_measure(f: FunctionExpr, taus: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Fallback for pieces of unknown monotonicity: measure on a fine graded grid."""
    s = np.linspace(0.0, 1.0, 4097)
    if lo == 0.0:
        edges = hi * np.concatenate([[0.0], np.geomspace(1e-15, 1.0, 4096)])
    else:
        edges = lo + (hi - lo) * s
    mid = Points.at(0.5 * (edges[1:] + edges[:-1]))
    vals = f.eval(mid)
    w = np.diff(edges)
    return ((vals[None, :] > taus[:, None]) * w[None, :]).sum(axis=1)


def distribution_many(f: FunctionExpr, taus) -> np.ndarray:
    """``lambda_f(tau) = |{f > tau}|`` for an array of levels."""
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any(taus < 0):
        raise ValueError("distribution levels must be nonnegative")
    if isinstance(f, Sampled) and f.divergent:
        return np.ones_like(taus)
    if isinstance(f, Step):
        v = np.asarray(f.values)
        return ((v[None, :] > taus[:, None]) * f.lengths[None, :]).sum(axis=1)
    out = np.zeros_like(taus)
    for lo, hi, trend in f.pieces():
        if hi <= lo:
            continue
        if trend == 0:
            val = f.eval(Points.at(np.array([0.5 * (lo + hi)])))[0]
            out += (hi - lo) * (val > taus)
            continue
        if trend is None:
            out += _sampled_piece_measure(f, taus, lo, hi)
            continue
        c = f.invert(taus, lo, hi)
        if c is None:
            c = _bisect(f, taus, lo, hi, trend)
        if trend < 0:
            m = c.x if lo == 0.0 else c.x - lo
        else:
            m = c.xc if hi == 1.0 else hi - c.x
        out += np.clip(m, 0.0, hi - lo)
    return np.clip(out, 0.0, 1.0)


def distribution(f: FunctionExpr, tau: float) -> float:
    return float(distribution_many(f, [tau])[0])


# rearrangement ----------------------------------------------------------------

def _rearrange_step(f: Step) -> Step:
    order = np.argsort(-np.asarray(f.values), kind="stable")
    vals = np.asarray(f.values)[order]
    lens = f.lengths[order]
    edges = np.concatenate([[0.0], np.cumsum(lens)])
    edges[-1] = 1.0
    keep = np.concatenate([[True], np.diff(vals) != 0])
    cut = np.concatenate([edges[:-1][keep], [1.0]])
    return Step(tuple(cut), tuple(vals[keep]))


def _rearrange_sampled(f: Sampled) -> Sampled:
    if f.global_trend() == -1:
        return f
    g = np.asarray(f.grid)
    v = np.asarray(f.values)
    s = np.asarray(f.spread)
    w = np.diff(g)
    if g[0] > 0:
        lead = f._tail_mass() / g[0] if f.tail0 is not None else 0.0
        v, s, w = np.append(v, lead), np.append(s, lead), np.append(w, g[0])
    if g[-1] < 1:
        v, s, w = np.append(v, 0.0), np.append(s, 0.0), np.append(w, 1 - g[-1])
    order = np.argsort(-v, kind="stable")
    edges = np.concatenate([[0.0], np.cumsum(w[order])])
    edges[-1] = 1.0
    ok = np.diff(edges) > 0
    edges = np.concatenate([[0.0], edges[1:][ok]])
    return Sampled(tuple(edges), tuple(v[order][ok]), tuple(s[order][ok]), True)


def rearrangement_grid(n: int = REARRANGE_CELLS) -> np.ndarray:
    """Output grid for numeric rearrangement: geometric toward 0, uniform near 1."""
    n_geo = (3 * n) // 4
    geo = np.geomspace(1e-15, 0.5, n_geo)
    lin = np.linspace(0.5, 1.0, n - n_geo + 2)[1:]
    return np.concatenate([geo, lin])


def rearrange_values(f: FunctionExpr, t) -> np.ndarray:
    """``f*(t) = inf{tau : lambda_f(tau) <= t}`` by bisection on ``log tau``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    lo = np.full(t.size, -700.0)
    hi = np.full(t.size, 700.0)
    zero = distribution_many(f, np.exp(lo)) <= t
    for _ in range(64):
        m = 0.5 * (lo + hi)
        below = distribution_many(f, np.exp(m)) <= t
        hi = np.where(below, m, hi)
        lo = np.where(below, lo, m)
    out = np.exp(hi)
    out = np.where(zero, 0.0, out)
    return np.where(hi >= 700.0, np.inf, out)


def _rearrange_numeric(f: FunctionExpr, n: int = REARRANGE_CELLS) -> Sampled:
    grid = rearrangement_grid(n)
    probe = grid.copy()
    probe[-1] = 1.0 - 1e-13
    fv = rearrange_values(f, probe)
    vals = 0.5 * (fv[:-1] + fv[1:])
    spread = 0.5 * np.abs(fv[:-1] - fv[1:])
    tail = f.singular_class()
    if not np.all(np.isfinite(vals)):
        return Sampled.divergent_marker()
    return Sampled(tuple(grid), tuple(vals), tuple(spread), True,
                   tail if tail.alpha < 0 or tail.beta > 0 else BOUNDED)


def rearrange(f: FunctionExpr) -> FunctionExpr:
    """Decreasing rearrangement ``f*``; exact on the catalog, else a flagged Sampled."""
    if isinstance(f, Step):
        return _rearrange_step(f)
    if isinstance(f, Sampled):
        return f if f.divergent else _rearrange_sampled(f)
    if isinstance(f, Scale):
        return Scale(f.k, rearrange(f.inner))
    if isinstance(f, Mirror):
        return rearrange(f.inner)
    trend = f.global_trend()
    if trend in (-1, 0):
        return f
    if trend == 1:
        return Mirror(f)
    if isinstance(f, Hyperbolic) and f.b > 0:
        w = f.hi - f.lo
        terms = [Scale(f.b, Restrict(ShiftedRecip(f.lo), 0.0, w) if w < 1 - f.lo else ShiftedRecip(f.lo))]
        if f.a > 0:
            terms.append(Step((0.0, w, 1.0), (f.a, 0.0)) if w < 1 else Step.const(f.a))
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))
    return _rearrange_numeric(f)


def cumulative_rearranged(f: FunctionExpr, t: float, tol: float = 1e-10) -> ExtReal:
    """``int_0^t f*``."""
    if not (0.0 < t <= 1.0):
        raise ValueError("t must lie in (0, 1]")
    fs = rearrange(f)
    if isinstance(fs, Sampled) and fs.divergent:
        return Divergent("marker")
    if not fs.blowup0().integrable():
        return Divergent("class")
    if isinstance(fs, Sampled):
        return _sampled_integral(fs, 0.0, t)
    try:
        v = float(fs.primitive(Points.at(np.array([t])))[0])
    except NoClosedForm:
        return integrate(fs, 0.0, t, tol)
    if not math.isfinite(v):
        return Divergent("class")
    return Finite(v, 4 * np.finfo(float).eps * abs(v), fs.approximate)


def primitive_values(f: FunctionExpr, pts: Points, tol: float = 1e-11) -> np.ndarray:
    """``int_0^x f`` from the closed form, or by quadrature point by point."""
    try:
        return f.primitive(pts)
    except NoClosedForm:
        pass
    if not f.blowup0().integrable():
        return np.full(np.shape(pts.x), np.inf)
    out = np.empty(np.shape(pts.x))
    for i, x in enumerate(np.atleast_1d(pts.x)):
        r = integrate(f, 0.0, float(x), tol)
        out[i] = r.value if isinstance(r, Finite) else np.inf
    return out


def singular_class(f: FunctionExpr) -> Asym:
    return f.singular_class()
