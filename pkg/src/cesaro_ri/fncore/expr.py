"""A closed catalog of nonnegative functions on [0, 1].

Each variant is an immutable dataclass that knows how to evaluate itself on a
:class:`Points` batch, where it is monotone, how it blows up at the two
endpoints, and (where a formula exists) its primitive ``int_0^x f`` and its
Copson transform ``int_x^1 f(t)/t dt``. Numerical fallbacks live in
:mod:`cesaro_ri.fncore.ops`; nothing here integrates numerically.

Evaluation always goes through the logarithmic coordinates carried by
``Points`` so that powers and logarithms stay accurate where ``x`` or
``1 - x`` underflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .asym import Asym, harshest
from .points import Points

BOUNDED = Asym(0.0, 0.0)
DIVERGENT_CLASS = Asym(-math.inf, 0.0)


class NoClosedForm(Exception):
    """Raised when a variant has no formula for the requested quantity."""


def _arr(v) -> np.ndarray:
    return np.asarray(v, dtype=float)


def _in(pts: Points, lo: float, hi: float) -> np.ndarray:
    """Mask of points in ``[lo, hi)``; ``hi == 1`` is treated as closed."""
    x = pts.x
    if lo <= 0.0:
        left = np.ones(x.shape, dtype=bool)
    else:
        left = x >= lo
    if hi >= 1.0:
        return left
    return left & (x < hi)


def clamp_points(pts: Points, lo: float, hi: float) -> Points:
    """Clip a point batch to ``[lo, hi]`` keeping log accuracy inside."""
    x, xc, lx, lxc = (np.array(np.broadcast_to(v, pts.x.shape), dtype=float)
                      for v in (pts.x, pts.xc, pts.lx, pts.lxc))
    for bound, mask in ((lo, pts.x < lo), (hi, pts.x > hi)):
        if mask.any():
            b = Points.at(np.full(int(mask.sum()), bound))
            x[mask], xc[mask], lx[mask], lxc[mask] = b.x, b.xc, b.lx, b.lxc
    return Points(x, xc, lx, lxc)


class FunctionExpr:
    """Base class of the function catalog."""

    exact: bool = True

    def eval(self, pts: Points) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x):
        x = _arr(x)
        if np.any(~(x > 0)) or np.any(x > 1):
            raise ValueError("evaluation point outside (0, 1]")
        out = self.eval(Points.at(x))
        return out if out.ndim else float(out)

    def primitive(self, pts: Points) -> np.ndarray:
        """``int_0^x f``; ``inf`` where it diverges."""
        raise NoClosedForm(type(self).__name__)

    def copson_primitive(self, pts: Points) -> np.ndarray:
        """``int_x^1 f(t) / t dt``."""
        raise NoClosedForm(type(self).__name__)

    def mean(self, pts: Points) -> np.ndarray:
        """``(1/x) int_0^x f``."""
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.primitive(pts) / pts.x
        return np.where(pts.x > 0, out, self.eval(pts))

    def eval_x(self, pts: Points) -> np.ndarray:
        """``x * f(x)``, finite where ``x`` underflows but ``f`` does not."""
        with np.errstate(invalid="ignore"):
            out = self.eval(pts) * pts.x
        return np.where(pts.x > 0, out, 0.0)

    def breaks(self) -> tuple[float, ...]:
        return ()

    def pieces(self) -> list[tuple[float, float, Optional[int]]]:
        """Intervals ``(lo, hi, trend)`` covering [0, 1].

        ``trend`` is -1 (nonincreasing), 0 (constant), +1 (nondecreasing) or
        ``None`` when the catalog cannot vouch for monotonicity.
        """
        return [(0.0, 1.0, None)]

    def global_trend(self) -> Optional[int]:
        return None

    def invert(self, tau: np.ndarray, lo: float, hi: float) -> Optional[Points]:
        """Solve ``f(x) = tau`` on a monotone piece in closed form, or None."""
        return None

    def blowup0(self) -> Asym:
        return BOUNDED

    def blowup1(self) -> Asym:
        return BOUNDED

    def singular_class(self) -> Asym:
        """Growth class of ``f*`` at 0: the worse of the two endpoints."""
        return harshest(self.blowup0(), self.blowup1())

    @property
    def approximate(self) -> bool:
        return not self.exact


def _merge_breaks(*groups) -> tuple[float, ...]:
    pts = sorted({float(b) for g in groups for b in g if 0.0 < b < 1.0})
    return tuple(pts)


def _pieces_from_breaks(bks, trend_at) -> list[tuple[float, float, Optional[int]]]:
    edges = [0.0, *bks, 1.0]
    return [(a, b, trend_at(a, b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _trend_on(pieces, a: float, b: float) -> Optional[int]:
    mid = 0.5 * (a + b)
    for lo, hi, t in pieces:
        if lo <= mid <= hi:
            return t
    return None


@dataclass(frozen=True)
class Step(FunctionExpr):
    """Piecewise constant: ``values[k]`` on ``[breaks[k], breaks[k+1])``."""

    breaks_: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(v) for v in self.breaks_)
        v = tuple(float(x) for x in self.values)
        object.__setattr__(self, "breaks_", b)
        object.__setattr__(self, "values", v)
        if len(b) < 2 or b[0] != 0.0 or b[-1] != 1.0:
            raise ValueError("Step breaks must start at 0 and end at 1")
        if any(q <= p for p, q in zip(b[:-1], b[1:])):
            raise ValueError("Step breaks must be strictly increasing")
        if len(v) != len(b) - 1:
            raise ValueError("Step needs one value per cell")
        if any(not (x >= 0 and math.isfinite(x)) for x in v):
            raise ValueError("Step values must be finite and nonnegative")

    @classmethod
    def const(cls, c: float) -> "Step":
        return cls((0.0, 1.0), (c,))

    @classmethod
    def indicator(cls, lo: float, hi: float) -> "Step":
        edges = sorted({0.0, lo, hi, 1.0})
        vals = [1.0 if lo <= a and b <= hi else 0.0 for a, b in zip(edges[:-1], edges[1:])]
        return cls(tuple(edges), tuple(vals))

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breaks_)

    def _cell(self, x):
        b = np.asarray(self.breaks_)
        return np.clip(np.searchsorted(b, x, side="right") - 1, 0, len(self.values) - 1)

    def eval(self, pts):
        return np.asarray(self.values)[self._cell(pts.x)]

    def primitive(self, pts):
        b = np.asarray(self.breaks_)
        v = np.asarray(self.values)
        cum = np.concatenate([[0.0], np.cumsum(v * np.diff(b))])
        k = self._cell(pts.x)
        return cum[k] + v[k] * (pts.x - b[k])

    def copson_primitive(self, pts):
        b = np.asarray(self.breaks_)
        v = np.asarray(self.values)
        with np.errstate(divide="ignore", invalid="ignore"):
            lb = -np.log(b)
            cell = v * (lb[:-1] - lb[1:])
        cell[0] = np.inf if v[0] > 0 else 0.0
        tail = np.concatenate([np.cumsum(cell[::-1])[::-1], [0.0]])
        k = self._cell(pts.x)
        with np.errstate(invalid="ignore"):
            inner = v[k] * (pts.lx - lb[k + 1])
        return np.where(v[k] > 0, inner, 0.0) + tail[k + 1]

    def breaks(self):
        return self.breaks_[1:-1]

    def pieces(self):
        return [(a, b, 0) for a, b in zip(self.breaks_[:-1], self.breaks_[1:])]

    def global_trend(self):
        d = np.diff(self.values)
        if np.all(d == 0):
            return 0
        if np.all(d <= 0):
            return -1
        if np.all(d >= 0):
            return 1
        return None


@dataclass(frozen=True)
class Power(FunctionExpr):
    """``c * t^a``."""

    c: float
    a: float

    def __post_init__(self):
        if not (self.c >= 0 and math.isfinite(self.c)):
            raise ValueError("Power coefficient must be finite and nonnegative")

    def eval(self, pts):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.c * np.exp(-self.a * pts.lx)

    def eval_x(self, pts):
        with np.errstate(over="ignore"):
            return self.c * np.exp(-(self.a + 1) * pts.lx)

    def primitive(self, pts):
        if self.a <= -1:
            return np.full(pts.x.shape, np.inf if self.c > 0 else 0.0)
        e = self.a + 1
        return self.c * np.exp(-e * pts.lx) / e

    def mean(self, pts):
        return self.eval(pts) / (self.a + 1) if self.a > -1 else self.primitive(pts)

    def copson_primitive(self, pts):
        if self.a == 0:
            return self.c * pts.lx
        with np.errstate(over="ignore"):
            return -self.c * np.expm1(-self.a * pts.lx) / self.a

    def pieces(self):
        return [(0.0, 1.0, self.global_trend())]

    def global_trend(self):
        if self.c == 0 or self.a == 0:
            return 0
        return -1 if self.a < 0 else 1

    def invert(self, tau, lo, hi):
        if self.c == 0 or self.a == 0:
            return None
        with np.errstate(divide="ignore"):
            u = -np.log(tau / self.c) / self.a
        return clamp_points(Points.near0(np.maximum(u, 0.0)), lo, hi)

    def blowup0(self):
        return Asym(self.a, 0.0) if self.c > 0 and self.a < 0 else BOUNDED


@dataclass(frozen=True)
class LogRecip(FunctionExpr):
    """``c * log(1/t)``."""

    c: float = 1.0

    def __post_init__(self):
        if not (self.c >= 0 and math.isfinite(self.c)):
            raise ValueError("LogRecip coefficient must be finite and nonnegative")

    def eval(self, pts):
        return self.c * pts.lx

    def primitive(self, pts):
        return self.c * pts.x * (pts.lx + 1.0)

    def mean(self, pts):
        return self.c * (pts.lx + 1.0)

    def copson_primitive(self, pts):
        return 0.5 * self.c * pts.lx ** 2

    def pieces(self):
        return [(0.0, 1.0, self.global_trend())]

    def global_trend(self):
        return -1 if self.c > 0 else 0

    def invert(self, tau, lo, hi):
        if self.c == 0:
            return None
        return clamp_points(Points.near0(np.maximum(tau / self.c, 0.0)), lo, hi)

    def blowup0(self):
        return Asym(0.0, 1.0) if self.c > 0 else BOUNDED


@dataclass(frozen=True)
class ShiftedRecip(FunctionExpr):
    """``1 / (t + y)`` on ``[0, 1 - y]``, zero beyond."""

    y: float

    def __post_init__(self):
        if not (0 < self.y <= 1):
            raise ValueError("ShiftedRecip needs y in (0, 1]")

    def _on(self, pts):
        return pts.xc >= self.y

    def eval(self, pts):
        return np.where(self._on(pts), 1.0 / (pts.x + self.y), 0.0)

    def primitive(self, pts):
        s = np.minimum(pts.x, 1.0 - self.y)
        return np.log1p(s / self.y)

    def copson_primitive(self, pts):
        y = self.y
        with np.errstate(divide="ignore", over="ignore"):
            big = np.log1p(y * (pts.xc - y) / pts.x)
        small = pts.lx + math.log(y * (1.0 - y)) if y < 1 else pts.lx
        val = np.where(pts.x > 1e-300, big, small) / y
        return np.where(self._on(pts), val, 0.0)

    def breaks(self):
        return _merge_breaks([1.0 - self.y])

    def pieces(self):
        return [p for p in [(0.0, 1.0 - self.y, -1), (1.0 - self.y, 1.0, 0)] if p[1] > p[0]]

    def global_trend(self):
        return -1

    def invert(self, tau, lo, hi):
        with np.errstate(divide="ignore"):
            x = 1.0 / tau - self.y
        return clamp_points(Points.at(np.clip(x, 0.0, 1.0)), lo, hi)


@dataclass(frozen=True)
class Hyperbolic(FunctionExpr):
    """``a + b/x`` on ``[lo, hi)``, zero elsewhere."""

    a: float
    b: float
    lo: float
    hi: float

    def __post_init__(self):
        if not (0 <= self.lo < self.hi <= 1):
            raise ValueError("Hyperbolic needs 0 <= lo < hi <= 1")
        ends = [self.hi] + ([self.lo] if self.lo > 0 else [])
        if any(self.a + self.b / e < -1e-12 * (abs(self.a) + abs(self.b / e)) for e in ends):
            raise ValueError("Hyperbolic piece must be nonnegative on its support")
        if self.lo == 0 and self.b < 0:
            raise ValueError("Hyperbolic piece must be nonnegative on its support")

    def eval(self, pts):
        with np.errstate(over="ignore", divide="ignore"):
            inv = np.where(pts.x > 0, 1.0 / np.where(pts.x > 0, pts.x, 1.0), np.exp(pts.lx))
            v = np.maximum(self.a + self.b * inv, 0.0)
        return np.where(_in(pts, self.lo, self.hi), v, 0.0)

    def primitive(self, pts):
        if self.lo == 0 and self.b > 0:
            return np.full(pts.x.shape, np.inf)
        s = np.clip(pts.x, self.lo, self.hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            logpart = self.b * np.log(s / self.lo) if self.b != 0 else 0.0
        return np.where(pts.x > self.lo, self.a * (s - self.lo) + logpart, 0.0)

    def copson_primitive(self, pts):
        with np.errstate(divide="ignore"):
            m = np.maximum(pts.x, self.lo)
            lm = np.where(pts.x >= self.lo, pts.lx, -math.log(self.lo) if self.lo > 0 else np.inf)
        val = self.a * (lm + math.log(self.hi)) + self.b * (1.0 / m - 1.0 / self.hi)
        return np.where(pts.x < self.hi, val, 0.0)

    def breaks(self):
        return _merge_breaks([self.lo, self.hi])

    def pieces(self):
        t = 0 if self.b == 0 else (-1 if self.b > 0 else 1)
        out = []
        if self.lo > 0:
            out.append((0.0, self.lo, 0))
        out.append((self.lo, self.hi, t))
        if self.hi < 1:
            out.append((self.hi, 1.0, 0))
        return out

    def global_trend(self):
        if self.lo == 0 and self.hi == 1 and self.b == 0:
            return 0
        if self.lo == 0 and self.b >= 0:
            return -1
        if self.hi == 1 and self.b <= 0:
            return 1
        return None

    def invert(self, tau, lo, hi):
        if self.b == 0:
            return None
        with np.errstate(divide="ignore", invalid="ignore"):
            x = self.b / (tau - self.a)
        x = np.where(np.isfinite(x) & (x > 0), x, np.inf)
        return clamp_points(Points.at(np.clip(x, 0.0, 1.0)), lo, hi)

    def blowup0(self):
        return Asym(-1.0, 0.0) if self.lo == 0 and self.b > 0 else BOUNDED


@dataclass(frozen=True)
class Sum(FunctionExpr):
    terms: tuple[FunctionExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def exact(self):
        return all(t.exact for t in self.terms)

    def eval(self, pts):
        out = np.zeros(np.shape(pts.x))
        for t in self.terms:
            out = out + t.eval(pts)
        return out

    def eval_x(self, pts):
        out = np.zeros(np.shape(pts.x))
        for t in self.terms:
            out = out + t.eval_x(pts)
        return out

    def primitive(self, pts):
        return sum((t.primitive(pts) for t in self.terms), np.zeros(np.shape(pts.x)))

    def copson_primitive(self, pts):
        return sum((t.copson_primitive(pts) for t in self.terms), np.zeros(np.shape(pts.x)))

    def breaks(self):
        return _merge_breaks(*(t.breaks() for t in self.terms))

    def pieces(self):
        child = [t.pieces() for t in self.terms]

        def trend(a, b):
            ts = {_trend_on(p, a, b) for p in child}
            if None in ts or {1, -1} <= ts:
                return None
            ts.discard(0)
            return ts.pop() if ts else 0

        return _pieces_from_breaks(self.breaks(), trend)

    def global_trend(self):
        ts = {t.global_trend() for t in self.terms}
        if None in ts or {1, -1} <= ts:
            return None
        ts.discard(0)
        return ts.pop() if ts else 0

    def invert(self, tau, lo, hi):
        mid = Points.at(np.array([0.5 * (lo + hi)]))
        moving = [t for t in self.terms if _trend_on(t.pieces(), lo, hi) != 0]
        if len(moving) != 1:
            return None
        offset = sum(float(t.eval(mid)[0]) for t in self.terms if t is not moving[0])
        return moving[0].invert(np.asarray(tau) - offset, lo, hi)

    def blowup0(self):
        return harshest(*(t.blowup0() for t in self.terms)) or BOUNDED

    def blowup1(self):
        return harshest(*(t.blowup1() for t in self.terms)) or BOUNDED


@dataclass(frozen=True)
class Scale(FunctionExpr):
    k: float
    inner: FunctionExpr

    def __post_init__(self):
        if not (self.k >= 0 and math.isfinite(self.k)):
            raise ValueError("Scale factor must be finite and nonnegative")

    @property
    def exact(self):
        return self.inner.exact

    def _mul(self, v):
        return np.zeros(np.shape(v)) if self.k == 0 else self.k * v

    def eval(self, pts):
        return self._mul(self.inner.eval(pts))

    def eval_x(self, pts):
        return self._mul(self.inner.eval_x(pts))

    def primitive(self, pts):
        return self._mul(self.inner.primitive(pts))

    def mean(self, pts):
        return self._mul(self.inner.mean(pts))

    def copson_primitive(self, pts):
        return self._mul(self.inner.copson_primitive(pts))

    def breaks(self):
        return self.inner.breaks()

    def pieces(self):
        if self.k == 0:
            return [(0.0, 1.0, 0)]
        return self.inner.pieces()

    def global_trend(self):
        return 0 if self.k == 0 else self.inner.global_trend()

    def invert(self, tau, lo, hi):
        if self.k == 0:
            return None
        return self.inner.invert(np.asarray(tau) / self.k, lo, hi)

    def blowup0(self):
        return BOUNDED if self.k == 0 else self.inner.blowup0()

    def blowup1(self):
        return BOUNDED if self.k == 0 else self.inner.blowup1()


@dataclass(frozen=True)
class Restrict(FunctionExpr):
    """``inner`` on ``[lo, hi)``, zero elsewhere."""

    inner: FunctionExpr
    lo: float
    hi: float

    def __post_init__(self):
        if not (0 <= self.lo < self.hi <= 1):
            raise ValueError("Restrict needs 0 <= lo < hi <= 1")

    @property
    def exact(self):
        return self.inner.exact

    def eval(self, pts):
        return np.where(_in(pts, self.lo, self.hi), self.inner.eval(pts), 0.0)

    def eval_x(self, pts):
        return np.where(_in(pts, self.lo, self.hi), self.inner.eval_x(pts), 0.0)

    def primitive(self, pts):
        base = self.inner.primitive(Points.at(np.array([self.lo])))[0] if self.lo > 0 else 0.0
        top = self.inner.primitive(clamp_points(pts, self.lo, self.hi))
        return np.where(pts.x > self.lo, top - base, 0.0)

    def copson_primitive(self, pts):
        end = self.inner.copson_primitive(Points.at(np.array([self.hi])))[0] if self.hi < 1 else 0.0
        low = self.inner.copson_primitive(clamp_points(pts, self.lo, self.hi))
        return np.where(pts.x < self.hi, low - end, 0.0)

    def breaks(self):
        return _merge_breaks([self.lo, self.hi],
                             [b for b in self.inner.breaks() if self.lo < b < self.hi])

    def pieces(self):
        inner = self.inner.pieces()

        def trend(a, b):
            if b <= self.lo or a >= self.hi:
                return 0
            return _trend_on(inner, a, b)

        return _pieces_from_breaks(self.breaks(), trend)

    def global_trend(self):
        t = self.inner.global_trend()
        if t == 0 or t == -1:
            return -1 if self.lo == 0 else None
        if t == 1 and self.hi == 1:
            return 1
        return None

    def invert(self, tau, lo, hi):
        if hi <= self.lo or lo >= self.hi:
            return None
        return self.inner.invert(tau, lo, hi)

    def blowup0(self):
        return self.inner.blowup0() if self.lo == 0 else BOUNDED

    def blowup1(self):
        return self.inner.blowup1() if self.hi == 1 else BOUNDED


@dataclass(frozen=True)
class Mirror(FunctionExpr):
    """``x -> inner(1 - x)``; keeps increasing functions exactly rearrangeable."""

    inner: FunctionExpr

    @property
    def exact(self):
        return self.inner.exact

    def eval(self, pts):
        return self.inner.eval(pts.mirror())

    def primitive(self, pts):
        g = self.inner
        if isinstance(g, Power):
            e = g.a + 1
            if e == 0:
                return g.c * pts.lxc
            with np.errstate(over="ignore"):
                return -g.c * np.expm1(-e * pts.lxc) / e
        total = g.primitive(Points.at(np.array([1.0])))[0]
        return total - g.primitive(pts.mirror())

    def breaks(self):
        return _merge_breaks([1.0 - b for b in self.inner.breaks()])

    def pieces(self):
        return [(1.0 - b, 1.0 - a, None if t is None else -t) for a, b, t in reversed(self.inner.pieces())]

    def global_trend(self):
        t = self.inner.global_trend()
        return None if t is None else -t

    def invert(self, tau, lo, hi):
        p = self.inner.invert(tau, 1.0 - hi, 1.0 - lo)
        return None if p is None else p.mirror()

    def blowup0(self):
        return self.inner.blowup1()

    def blowup1(self):
        return self.inner.blowup0()


def mirrored_power(c: float, a: float) -> Mirror:
    """``c * (1 - t)^a`` as an exact catalog element."""
    return Mirror(Power(c, a))


@dataclass(frozen=True)
class Sampled(FunctionExpr):
    """Piecewise-constant approximation: ``values[k]`` on ``[grid[k], grid[k+1])``.

    ``spread[k]`` bounds how far the represented function can stray from the
    stored value inside cell ``k``. When the grid starts above 0, ``tail0``
    describes the growth on ``[0, grid[0])`` as ``value0 * (t/grid[0])^alpha``
    times the matching power of ``log(1/t)``. A ``divergent`` sample stands for
    the everywhere-infinite function.
    """

    grid: tuple[float, ...]
    values: tuple[float, ...]
    spread: tuple[float, ...] = ()
    approx: bool = True
    tail0: Optional[Asym] = None
    divergent: bool = False
    resolution: int = field(default=0, compare=False)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        s = np.asarray(self.spread if len(self.spread) else np.zeros(v.size), dtype=float)
        if g.ndim != 1 or g.size != v.size + 1 or s.size != v.size:
            raise ValueError("Sampled needs len(grid) == len(values) + 1 == len(spread) + 1")
        if np.any(np.diff(g) <= 0) or g[0] < 0 or g[-1] > 1:
            raise ValueError("Sampled grid must be strictly increasing inside [0, 1]")
        if not self.divergent and (np.any(~(v >= 0)) or np.any(~np.isfinite(v))):
            raise ValueError("Sampled values must be finite and nonnegative")
        for name, arr in (("grid", g), ("values", v), ("spread", s)):
            object.__setattr__(self, name, tuple(arr.tolist()))
        object.__setattr__(self, "resolution", v.size)

    @classmethod
    def divergent_marker(cls) -> "Sampled":
        return cls((0.0, 1.0), (math.inf,), (0.0,), True, None, True)

    @property
    def exact(self):
        return not self.approx

    def _cell(self, x):
        g = np.asarray(self.grid)
        return np.searchsorted(g, x, side="right") - 1

    def _tail(self, pts):
        g0, v0 = self.grid[0], self.values[0]
        c = self.tail0 or BOUNDED
        l0 = -math.log(g0)
        with np.errstate(all="ignore"):
            r = np.exp(-c.alpha * (pts.lx - l0))
            if c.beta:
                r = r * (pts.lx / l0) ** c.beta
        return v0 * r

    def eval(self, pts):
        if self.divergent:
            return np.full(np.shape(pts.x), np.inf)
        v = np.asarray(self.values)
        k = self._cell(pts.x)
        inside = (k >= 0) & (k < v.size)
        out = np.where(inside, v[np.clip(k, 0, v.size - 1)], 0.0)
        if self.grid[-1] >= 1.0:
            out = np.where(pts.x >= 1.0, v[-1], out)
        if self.tail0 is not None and self.grid[0] > 0:
            out = np.where(k < 0, self._tail(pts), out)
        return out

    def _tail_mass(self) -> float:
        if self.tail0 is None or self.grid[0] == 0:
            return 0.0
        if not self.tail0.integrable():
            return math.inf
        from .quadrature import quad
        return float(quad(self._tail, 0.0, self.grid[0], 1e-12).value[0])

    def primitive(self, pts):
        if self.divergent:
            return np.full(np.shape(pts.x), np.inf)
        g = np.asarray(self.grid)
        v = np.asarray(self.values)
        cum = np.concatenate([[0.0], np.cumsum(v * np.diff(g))]) + self._tail_mass()
        k = self._cell(pts.x)
        kk = np.clip(k, 0, v.size - 1)
        inside = cum[kk] + v[kk] * (pts.x - g[kk])
        out = np.where(k >= v.size, cum[-1], inside)
        if g[0] > 0:
            if self.tail0 is None:
                out = np.where(k < 0, 0.0, out)
            else:
                frac = self._tail(pts) * pts.x / (max(self.tail0.alpha, -1 + 1e-12) + 1)
                out = np.where(k < 0, frac, out)
        return out

    def copson_primitive(self, pts):
        if self.divergent:
            return np.full(np.shape(pts.x), np.inf)
        g = np.asarray(self.grid)
        v = np.asarray(self.values)
        with np.errstate(divide="ignore"):
            lg = -np.log(g)
        cell = np.where(v > 0, v * (lg[:-1] - lg[1:]), 0.0)
        tail = np.concatenate([np.cumsum(cell[::-1])[::-1], [0.0]])
        k = np.clip(self._cell(pts.x), 0, v.size - 1)
        with np.errstate(invalid="ignore"):
            part = np.where(v[k] > 0, v[k] * (pts.lx - lg[k + 1]), 0.0)
        out = part + tail[k + 1]
        return np.where(pts.x >= g[-1], 0.0, out)

    def breaks(self):
        return _merge_breaks(self.grid)

    def pieces(self):
        g = self.grid
        out = [(a, b, 0) for a, b in zip(g[:-1], g[1:])]
        if g[0] > 0:
            out.insert(0, (0.0, g[0], -1 if self.tail0 is not None and self.tail0.alpha < 0 else None))
        if g[-1] < 1:
            out.append((g[-1], 1.0, 0))
        return out

    def global_trend(self):
        d = np.diff(self.values)
        if self.grid[-1] < 1 and self.values[-1] > 0:
            d = np.append(d, -1.0)
        if np.all(d <= 0) and (self.grid[0] == 0 or self.tail0 is not None):
            return -1
        if np.all(d >= 0) and self.grid[0] == 0 and self.grid[-1] == 1:
            return 1
        return None

    def blowup0(self):
        if self.divergent:
            return DIVERGENT_CLASS
        return self.tail0 if self.tail0 is not None and self.grid[0] > 0 else BOUNDED


@dataclass(frozen=True)
class CesaroImage(FunctionExpr):
    """``(1/x) int_0^x inner`` evaluated from the inner primitive."""

    inner: FunctionExpr

    @property
    def exact(self):
        return self.inner.exact

    def eval(self, pts):
        return self.inner.mean(pts)

    def copson_primitive(self, pts):
        # int_x^1 C g(t)/t dt = int_0^1 g(s) (1/max(x,s) - 1) ds
        g = self.inner
        one = Points.at(np.array([1.0]))
        total = g.primitive(one)[0]
        return g.mean(pts) - total + g.copson_primitive(pts)

    def breaks(self):
        return self.inner.breaks()

    def pieces(self):
        return [(0.0, 1.0, self.global_trend())]

    def global_trend(self):
        return self.inner.global_trend()

    def blowup0(self):
        c = self.inner.blowup0()
        if not c.integrable():
            return DIVERGENT_CLASS
        p = c.primitive()
        return Asym(p.alpha - 1, p.beta)

    def blowup1(self):
        c = self.inner.blowup1()
        if c.integrable():
            return BOUNDED
        if c.alpha < -1:
            return Asym(c.alpha + 1, c.beta)
        return Asym(0.0, c.beta + 1)


@dataclass(frozen=True)
class CopsonImage(FunctionExpr):
    """``int_x^1 inner(t)/t dt`` evaluated from the inner Copson primitive."""

    inner: FunctionExpr

    @property
    def exact(self):
        return self.inner.exact

    def eval(self, pts):
        return self.inner.copson_primitive(pts)

    def primitive(self, pts):
        # int_0^x C* g = int_0^x g + x C* g(x)
        g = self.inner
        return g.primitive(pts) + pts.x * g.copson_primitive(pts)

    def mean(self, pts):
        g = self.inner
        return g.mean(pts) + g.copson_primitive(pts)

    def breaks(self):
        return self.inner.breaks()

    def pieces(self):
        return [(0.0, 1.0, -1)]

    def global_trend(self):
        return -1

    def blowup0(self):
        c = self.inner.blowup0() * Asym(-1.0, 0.0)
        if c.integrable():
            return BOUNDED
        if c.alpha < -1:
            return Asym(c.alpha + 1, c.beta)
        return Asym(0.0, c.beta + 1)

    def blowup1(self):
        return BOUNDED if self.inner.blowup1().integrable() else DIVERGENT_CLASS


def const(c: float) -> Step:
    return Step.const(c)
