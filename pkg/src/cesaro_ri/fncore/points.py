"""Evaluation points on [0, 1] with accurate complements and logarithms.

Near the endpoints ``x`` itself is a poor coordinate: ``1 - x`` cancels near 1
and ``x`` underflows long before ``log(1/x)`` becomes large. Every point is
carried as ``(x, 1-x, -log x, -log(1-x))`` built from whichever of these is
known exactly, plus the Jacobian of the quadrature coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Points:
    x: np.ndarray
    xc: np.ndarray
    lx: np.ndarray
    lxc: np.ndarray
    jac: np.ndarray | float = 1.0
    jx: np.ndarray | float | None = None

    def jac_over_x(self):
        """``jac / x``, exactly 1 in the near-0 coordinate (x may underflow)."""
        if self.jx is not None:
            return self.jx
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.jac == self.x, 1.0, self.jac / self.x)

    @classmethod
    def at(cls, x) -> "Points":
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return cls(x, 1.0 - x, -np.log(x), -np.log1p(-x))

    @classmethod
    def from_complement(cls, d) -> "Points":
        d = np.asarray(d, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return cls(1.0 - d, d, -np.log1p(-d), -np.log(d))

    @classmethod
    def near0(cls, u) -> "Points":
        """``x = exp(-u)``; the Jacobian ``dx/du`` is attached."""
        u = np.asarray(u, dtype=float)
        x = np.exp(-u)
        xc = -np.expm1(-u)
        with np.errstate(divide="ignore"):
            return cls(x, xc, u, -np.log(xc), x, np.ones_like(u))

    @classmethod
    def near1(cls, u) -> "Points":
        """``1 - x = exp(-u)``."""
        u = np.asarray(u, dtype=float)
        d = np.exp(-u)
        x = -np.expm1(-u)
        with np.errstate(divide="ignore"):
            return cls(x, d, -np.log(x), u, d, d / x)

    def mirror(self) -> "Points":
        return Points(self.xc, self.x, self.lxc, self.lx, self.jac)

    def __len__(self) -> int:
        return self.x.size


def stack(parts: list[Points]) -> Points:
    """Concatenate point sets (Jacobians broadcast to arrays)."""
    def col(name):
        return np.concatenate([np.broadcast_to(getattr(p, name), p.x.shape) for p in parts])

    return Points(col("x"), col("xc"), col("lx"), col("lxc"), col("jac"))
