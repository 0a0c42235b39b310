"""Quasi-concave fundamental-function candidates.

Every ``phi`` is available in the coordinate ``L = log(1/t)`` so that the
spaces can be probed at ``t`` far below the smallest double:
``log_eval(L) = log phi(e^-L)`` and ``tderiv_log(L) = t * phi'(t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fncore.asym import Asym


def _L(t):
    with np.errstate(divide="ignore"):
        return -np.log(np.asarray(t, dtype=float))


class QuasiConcave:
    """Base class; subclasses supply the log-coordinate formulas."""

    def log_eval(self, L):
        raise NotImplementedError

    def tderiv_log(self, L):
        raise NotImplementedError

    def eval_log(self, L):
        with np.errstate(over="ignore", under="ignore"):
            return np.exp(self.log_eval(np.asarray(L, dtype=float)))

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        out = np.where(t > 0, self.eval_log(_L(np.where(t > 0, t, 1.0))), self.at_zero())
        return out if out.ndim else float(out)

    def deriv(self, t):
        """``phi'(t)``; one-sided (possibly infinite) at 0."""
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            safe = np.where(t > 0, t, 1.0)
            out = np.where(t > 0, self.tderiv_log(_L(safe)) / safe, self.deriv_at_zero())
        return out if out.ndim else float(out)

    def at_zero(self) -> float:
        c = self.klass()
        return 0.0 if (c.alpha > 0 or (c.alpha == 0 and c.beta < 0)) else math.nan

    def deriv_at_zero(self) -> float:
        c = self.deriv_class()
        return math.inf if (c.alpha < 0 or (c.alpha == 0 and c.beta > 0)) else math.nan

    def klass(self) -> Asym:
        """Growth class of ``phi`` at 0."""
        raise NotImplementedError

    def deriv_class(self) -> Asym:
        raise NotImplementedError

    @property
    def name(self) -> str:
        raise NotImplementedError

    def density_class(self) -> Asym:
        """Class of ``phi(y)/y`` at 0 when ``phi(y) -> 0``, else of ``log(1/y)``-weighted."""
        c = self.klass()
        if c.alpha < 1 - 1e-12:
            return Asym(c.alpha - 1, c.beta)
        return Asym(0.0, 1.0 + c.beta)


@dataclass(frozen=True)
class PowerPhi(QuasiConcave):
    """``t^a`` with ``0 < a <= 1``."""

    a: float

    def __post_init__(self):
        if not (0 < self.a <= 1):
            raise ValueError("PowerPhi needs 0 < a <= 1")

    def log_eval(self, L):
        return -self.a * np.asarray(L, dtype=float)

    def tderiv_log(self, L):
        with np.errstate(under="ignore"):
            return self.a * np.exp(-self.a * np.asarray(L, dtype=float))

    def klass(self):
        return Asym(self.a, 0.0)

    def deriv_class(self):
        return Asym(self.a - 1, 0.0)

    @property
    def name(self):
        return f"t^{self.a:g}"


@dataclass(frozen=True)
class LogPhi(QuasiConcave):
    """``log(e/t)^(-1/p)``."""

    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError("LogPhi needs p > 0")

    def log_eval(self, L):
        return -np.log1p(np.asarray(L, dtype=float)) / self.p

    def tderiv_log(self, L):
        return (1.0 / self.p) * (1.0 + np.asarray(L, dtype=float)) ** (-1.0 / self.p - 1.0)

    def klass(self):
        return Asym(0.0, -1.0 / self.p)

    def deriv_class(self):
        return Asym(-1.0, -1.0 / self.p - 1.0)

    @property
    def name(self):
        return f"log(e/t)^(-1/{self.p:g})"


@dataclass(frozen=True)
class RatioPsi(QuasiConcave):
    """``t / phi(t)``: the fundamental function of the associate space."""

    base: QuasiConcave

    def log_eval(self, L):
        L = np.asarray(L, dtype=float)
        return -L - self.base.log_eval(L)

    def tderiv_log(self, L):
        L = np.asarray(L, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = self.base.tderiv_log(L) / self.base.eval_log(L)
        return self.eval_log(L) * (1.0 - ratio)

    def at_zero(self):
        c = self.klass()
        if c.alpha == 0 and c.beta == 0:
            return 1.0
        return super().at_zero()

    def klass(self):
        c = self.base.klass()
        return Asym(1.0 - c.alpha, -c.beta)

    def deriv_class(self):
        c = self.base.klass()
        if abs(c.alpha - 1) < 1e-12 and c.beta == 0:
            return Asym(math.inf, 0.0)
        if abs(c.alpha - 1) < 1e-12:
            return Asym(-1.0, -c.beta - 1.0)
        return Asym(-c.alpha, -c.beta)

    @property
    def name(self):
        return f"t/({self.base.name})"


@dataclass(frozen=True)
class TablePhi(QuasiConcave):
    """Piecewise-linear interpolant of tabulated values (for probing validation)."""

    ts: tuple[float, ...]
    vals: tuple[float, ...]

    def log_eval(self, L):
        t = np.exp(-np.asarray(L, dtype=float))
        with np.errstate(divide="ignore"):
            return np.log(np.interp(t, (0.0,) + tuple(self.ts), (0.0,) + tuple(self.vals)))

    def tderiv_log(self, L):
        t = np.exp(-np.asarray(L, dtype=float))
        xs = np.asarray((0.0,) + tuple(self.ts))
        ys = np.asarray((0.0,) + tuple(self.vals))
        k = np.clip(np.searchsorted(xs, t, side="right") - 1, 0, xs.size - 2)
        return t * (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])

    def klass(self):
        return Asym(1.0, 0.0)

    def deriv_class(self):
        return Asym(0.0, 0.0)

    @property
    def name(self):
        return "table"


def ratio_psi(phi: QuasiConcave) -> QuasiConcave:
    """``t/phi(t)``, collapsing the double ratio back to ``phi``."""
    if isinstance(phi, RatioPsi):
        return phi.base
    return RatioPsi(phi)


@dataclass(frozen=True)
class Validation:
    ok: bool
    violations: tuple[str, ...] = ()


PROBE_GRID = np.geomspace(1e-8, 1.0, 256)


def validate_phi(phi: QuasiConcave, grid: np.ndarray = PROBE_GRID) -> Validation:
    """Probe increase of ``phi`` and decrease of ``phi(t)/t`` on a log grid."""
    v = np.asarray(phi.eval(grid), dtype=float)
    out = []
    rel = 1e-12
    inc = np.diff(v) >= -rel * np.abs(v[1:])
    if not inc.all():
        k = int(np.flatnonzero(~inc)[0])
        out.append(f"phi decreases between t={grid[k]:.6g} and t={grid[k + 1]:.6g}")
    q = v / grid
    dec = np.diff(q) <= rel * np.abs(q[:-1])
    if not dec.all():
        k = int(np.flatnonzero(~dec)[0])
        out.append(f"phi(t)/t increases between t={grid[k]:.6g} and t={grid[k + 1]:.6g}")
    c = phi.klass()
    if not (c.alpha > 0 or (c.alpha == 0 and c.beta < 0)):
        out.append("phi(t) does not tend to 0 as t -> 0")
    elif not np.all(np.diff(phi.eval(np.geomspace(1e-300, 1e-8, 32))) >= 0):
        out.append("phi is not decreasing toward 0")
    return Validation(not out, tuple(out))


def check_concave(phi: QuasiConcave, grid: np.ndarray = PROBE_GRID) -> Validation:
    """Nonincreasing difference quotients on the probe grid."""
    g = np.concatenate([[0.0], grid])
    v = np.asarray(phi.eval(g), dtype=float)
    dq = np.diff(v) / np.diff(g)
    ok = np.diff(dq) <= 1e-9 * np.abs(dq[:-1])
    if ok.all():
        return Validation(True)
    k = int(np.flatnonzero(~ok)[0])
    return Validation(False, (f"difference quotient increases near t={g[k + 1]:.6g}",))
