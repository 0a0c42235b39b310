"""The vector measure ``A -> C(chi_A)``, its density and its variation.

The workhorse is :func:`scaled_density_norm`, which returns ``y * ||F_y||_X``
for a whole batch of ``y`` given as :class:`Points`. Working with the scaled
quantity in the coordinate ``s = t / y`` keeps it finite and accurate for ``y``
far below the smallest double, which the graded outer quadrature over ``y``
needs.

* Lp: closed forms.
* Lorentz: after an integration by parts,
  ``y ||F_y|| = y phi(1-y) + int_0^{log(1/y)} phi(y (e^u - 1)) e^-u du``.
* Marcinkiewicz: a sup over a log grid in ``s`` using the exact cumulative
  ``int_0^t (F_y)* = log(1 + min(t, 1-y)/y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cesaro import cesaro
from .fncore.asym import Asym
from .fncore.expr import FunctionExpr, Hyperbolic, Sampled, ShiftedRecip, Step
from .fncore.extreal import Divergent, ExtReal, Finite, Unknown
from .fncore.points import Points
from .fncore.quadrature import quad
from .rispaces.norms import SUP_STABLE
from .rispaces.phi import QuasiConcave
from .rispaces.spaces import Lorentz, Lp, Marcinkiewicz, RISpace

_GX10, _GW10 = np.polynomial.legendre.leggauss(10)
_GX20, _GW20 = np.polynomial.legendre.leggauss(20)
U_CUT = 45.0
SUP_W_MIN = -30.0
SUP_W_MAX = 40.0


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint closed subintervals of [0, 1], sorted."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", iv)
        prev = 0.0
        for k, (a, b) in enumerate(iv):
            if not (0.0 <= a < b <= 1.0):
                raise ValueError(f"interval {k} = [{a}, {b}] is not a subinterval of [0, 1]")
            if k and a < prev:
                raise ValueError("intervals must be sorted and disjoint")
            prev = b

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        """Parse ``"a,b;c,d"``."""
        parts = [p for p in text.split(";") if p.strip()]
        out = []
        for p in parts:
            a, b = (float(v) for v in p.split(","))
            out.append((a, b))
        return cls(tuple(out))

    @property
    def measure(self) -> float:
        return sum(b - a for a, b in self.intervals)

    def indicator(self) -> Step:
        if not self.intervals:
            return Step.const(0.0)
        edges = sorted({0.0, 1.0, *(e for iv in self.intervals for e in iv)})
        vals = []
        for a, b in zip(edges[:-1], edges[1:]):
            m = 0.5 * (a + b)
            vals.append(1.0 if any(lo <= m <= hi for lo, hi in self.intervals) else 0.0)
        return Step(tuple(edges), tuple(vals))


def measure_of(A: IntervalSet) -> FunctionExpr:
    """``m(A) = C(chi_A)`` as exact Hyperbolic pieces."""
    return cesaro(A.indicator())


def density(y: float) -> FunctionExpr:
    """``F_y(x) = (1/x) chi_[y,1](x)``."""
    if not (0 < y <= 1):
        raise ValueError("density needs y in (0, 1]")
    if y == 1:
        return Step.const(0.0)
    return Hyperbolic(0.0, 1.0, y, 1.0)


def density_rearranged(y: float) -> FunctionExpr:
    """``(F_y)*(t) = 1/(t+y)`` on ``[0, 1-y]``."""
    if not (0 < y <= 1):
        raise ValueError("density needs y in (0, 1]")
    if y == 1:
        return Step.const(0.0)
    return ShiftedRecip(y)


# batched kernels ---------------------------------------------------------------

def density_norm_class(X: RISpace) -> Asym:
    """Growth class of ``y -> ||F_y||_X`` as ``y -> 0``."""
    if isinstance(X, Lp):
        if X.p == 1:
            return Asym(0.0, 1.0)
        if math.isinf(X.p):
            return Asym(-1.0, 0.0)
        return Asym(1.0 / X.p - 1.0, 0.0)
    return X.phi.density_class()


def _panels(U: np.ndarray):
    """Per-row panel edges on ``[0, U]``: geometric toward 0, unit width beyond."""
    Umax = float(np.max(U)) if U.size else 0.0
    rel = 2.0 ** -np.arange(40, 0, -1)
    geo = rel[None, :] * U[:, None]
    ext = np.arange(1.0, max(Umax, 1.0), 1.0)
    lin = np.where(ext[None, :] < U[:, None], ext[None, :], U[:, None])
    edges = np.concatenate([np.zeros((U.size, 1)), geo, lin, U[:, None]], axis=1)
    edges.sort(axis=1)
    return edges[:, :-1], edges[:, 1:]


def _lorentz_kernel(phi: QuasiConcave, pts: Points):
    ly = np.asarray(pts.lx, dtype=float)
    U = np.minimum(ly, U_CUT)
    lo, hi = _panels(U)
    mid = 0.5 * (lo + hi)[..., None]
    half = 0.5 * (hi - lo)[..., None]

    def rule(x, w):
        u = mid + half * x
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            Lt = ly[:, None, None] - np.log(np.expm1(u))
            val = phi.eval_log(Lt) * np.exp(-u)
        val = np.where(half > 0, val, 0.0)
        return ((val * w).sum(axis=-1) * half[..., 0]).sum(axis=1)

    i10 = rule(_GX10, _GW10)
    i20 = rule(_GX20, _GW20)
    with np.errstate(over="ignore", under="ignore"):
        y = np.exp(-ly)
    end = y * phi.eval_log(np.asarray(pts.lxc, dtype=float))
    end = np.where(y > 0, end, 0.0)
    return end + i20, np.abs(i20 - i10) + 1e-15 * (end + i20)


def _marcinkiewicz_kernel(phi: QuasiConcave, equiv: bool, pts: Points):
    ly = np.asarray(pts.lx, dtype=float)
    lyc = np.asarray(pts.lxc, dtype=float)
    w_max = ly
    with np.errstate(divide="ignore"):
        # t = 1 - y, where the cumulative of (F_y)* stops growing
        w_kink = np.clip(np.log(np.expm1(ly)), SUP_W_MIN, w_max)

    def h(w):
        # w = log s, s = t / y, t = y e^w <= 1
        Lt = ly[:, None] - w
        with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
            ph = phi.eval_log(Lt)
            s = np.exp(w)
            if equiv:
                val = ph / (1.0 + s)
                val = np.where(Lt >= lyc[:, None], val, 0.0)
            else:
                S = np.expm1(ly)[:, None]
                val = ph * np.log1p(np.minimum(s, S)) / s
        return np.where(np.isfinite(val), val, 0.0)

    def best(n):
        frac = np.linspace(0.0, 1.0, n)
        top = np.minimum(w_max, SUP_W_MAX)
        w = SUP_W_MIN + frac[None, :] * (top[:, None] - SUP_W_MIN)
        w = np.sort(np.concatenate([w, w_kink[:, None], w_max[:, None]], axis=1), axis=1)
        v = h(w)
        k = np.argmax(v, axis=1)
        return v[np.arange(v.shape[0]), k], w, k

    v1, _, _ = best(256)
    v2, w, k = best(512)
    rows = np.arange(w.shape[0])
    a = w[rows, np.maximum(k - 1, 0)]
    b = w[rows, np.minimum(k + 1, w.shape[1] - 1)]
    g = (math.sqrt(5) - 1) / 2
    x1, x2 = b - g * (b - a), a + g * (b - a)
    f1, f2 = h(x1[:, None])[:, 0], h(x2[:, None])[:, 0]
    for _ in range(60):
        left = f1 >= f2
        b = np.where(left, x2, b)
        a = np.where(left, a, x1)
        nx1 = np.where(left, b - g * (b - a), x2)
        nx2 = np.where(left, x1, a + g * (b - a))
        nf1 = np.where(left, h(nx1[:, None])[:, 0], f2)
        nf2 = np.where(left, f1, h(nx2[:, None])[:, 0])
        x1, x2, f1, f2 = nx1, nx2, nf1, nf2
    v3 = np.maximum(v2, np.maximum(f1, f2))
    stable = np.abs(v2 - v1) <= SUP_STABLE * np.abs(v2)
    err = np.where(stable, np.abs(v3 - v1), np.inf)
    return v3, err


def _lp_kernel(p: float, pts: Points):
    ly = np.asarray(pts.lx, dtype=float)
    y = np.asarray(pts.x, dtype=float)
    if p == 1:
        v = y * ly
    elif math.isinf(p):
        v = np.where(ly > 0, 1.0, 0.0)
    else:
        with np.errstate(invalid="ignore"):
            v = (y * (-np.expm1(-(p - 1) * ly)) / (p - 1)) ** (1.0 / p)
    return v, 4 * np.finfo(float).eps * np.abs(v)


def scaled_density_norm(X: RISpace, pts: Points):
    """``(y ||F_y||_X, err)`` for every point ``y`` in the batch."""
    if isinstance(X, Lp):
        return _lp_kernel(X.p, pts)
    if isinstance(X, Lorentz):
        return _lorentz_kernel(X.phi, pts)
    if isinstance(X, Marcinkiewicz):
        return _marcinkiewicz_kernel(X.phi, X.use_equiv_norm, pts)
    raise TypeError(f"unsupported space {X!r}")


def density_norm(X: RISpace, y: float, tol: float = 1e-8) -> ExtReal:
    """``||F_y||_X``."""
    if not (0 < y <= 1):
        raise ValueError("density needs y in (0, 1]")
    if y == 1:
        return Finite(0.0, 0.0)
    v, e = scaled_density_norm(X, Points.at(np.array([y])))
    if not np.isfinite(e[0]):
        return Unknown("sup probe not stabilized under refinement")
    return Finite(float(v[0] / y), float(e[0] / y))


def density_norms(X: RISpace, ys) -> np.ndarray:
    """Vector of ``||F_y||_X`` (no error bookkeeping)."""
    ys = np.asarray(ys, dtype=float)
    v, _ = scaled_density_norm(X, Points.at(ys))
    return v / ys


# variation ---------------------------------------------------------------------

def _weighted_integral(X: RISpace, weight: Optional[FunctionExpr], a: float, b: float,
                       tol: float) -> ExtReal:
    def integrand(pts):
        v, _ = scaled_density_norm(X, pts)
        if weight is not None:
            v = v * weight.eval(pts)
        return v * pts.jac_over_x()

    breaks = weight.breaks() if weight is not None else ()
    r = quad(integrand, a, b, tol, breaks=breaks, weighted=True)
    value, err, status = r.scalar()
    if status == "ok":
        return Finite(value, err + 1e-12 * abs(value),
                      weight is not None and weight.approximate)
    if status == "growing":
        return Divergent("probe")
    return Unknown(f"quadrature {status}")


def variation(X: RISpace, A: IntervalSet, tol: float = 1e-8) -> ExtReal:
    """``|m_X|(A) = int_A ||F_y||_X dy``."""
    total: ExtReal = Finite(0.0, 0.0)
    for a, b in A.intervals:
        if a == 0.0 and not density_norm_class(X).integrable():
            return Divergent("class")
        part = _weighted_integral(X, None, a, b, tol)
        if not isinstance(part, Finite):
            return part
        total = Finite(total.value + part.value, total.err + part.err)
    return total


FULL = IntervalSet(((0.0, 1.0),))


def lorentz_total_variation(phi: QuasiConcave, tol: float = 1e-8) -> ExtReal:
    """``int_0^1 log(1/t) phi'(t) dt``."""
    if not (Asym(0.0, 1.0) * phi.deriv_class()).integrable():
        return Divergent("class")
    r = quad(lambda p: p.lx * phi.tderiv_log(p.lx) * p.jac_over_x(), 0.0, 1.0, tol,
             weighted=True)
    value, err, status = r.scalar()
    if status == "ok":
        return Finite(value, err)
    if status == "growing":
        return Divergent("probe")
    return Unknown(f"quadrature {status}")


@dataclass(frozen=True)
class VariationVerdict:
    verdict: Optional[bool]
    route: str
    evidence: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return {True: "true", False: "false", None: "unknown"}[self.verdict]


def _embedded_lorentz(X: RISpace) -> Optional[QuasiConcave]:
    """A catalog ``phi`` with ``Lambda(phi)`` contained in ``X``, if one is known."""
    from .rispaces.phi import PowerPhi
    if isinstance(X, Lp) and not math.isinf(X.p):
        return PowerPhi(1.0 / X.p)
    if isinstance(X, Marcinkiewicz):
        return X.phi
    return None


def finite_variation(X: RISpace, tol: float = 1e-8) -> VariationVerdict:
    """Whether ``m_X`` has finite variation, with the route that decided it."""
    if isinstance(X, Lorentz):
        tv = lorentz_total_variation(X.phi, tol)
        ev = {"total_variation": tv}
        if isinstance(tv, Finite):
            return VariationVerdict(True, "lorentz-criterion", ev)
        if isinstance(tv, Divergent):
            return VariationVerdict(False, "lorentz-criterion", ev)
    else:
        ev = {}
        phi = _embedded_lorentz(X)
        if phi is not None:
            tv = lorentz_total_variation(phi, tol)
            ev["embedded_lorentz"] = phi
            ev["embedded_total_variation"] = tv
            if isinstance(tv, Finite):
                return VariationVerdict(True, "embedding", ev)
    v = variation(X, FULL, tol)
    ev["variation"] = v
    if isinstance(v, Finite):
        return VariationVerdict(True, "variation-probe", ev)
    if isinstance(v, Divergent):
        return VariationVerdict(False, f"variation-{v.route}", ev)
    return VariationVerdict(None, "inconclusive", ev)


def weighted_l1_norm(X: RISpace, f: FunctionExpr, tol: float = 1e-8) -> ExtReal:
    """``int_0^1 f(y) ||F_y||_X dy``, the norm of ``L^1(|m_X|)``."""
    if isinstance(f, Sampled) and f.divergent:
        return Divergent("marker")
    if not (f.blowup0() * density_norm_class(X)).integrable():
        return Divergent("class")
    if not f.blowup1().integrable():
        return Divergent("class")
    return _weighted_integral(X, f, 0.0, 1.0, tol)
