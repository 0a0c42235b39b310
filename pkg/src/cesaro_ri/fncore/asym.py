"""Endpoint asymptotic classes ``t^alpha * log(1/t)^beta`` as ``t -> 0+``.

Every catalog function knows how it blows up at the endpoints of [0, 1].
Convergence of integrals and boundedness of sup-type expressions near an
endpoint is decided from these classes rather than from truncated numerics,
which cannot tell ``log log`` growth from convergence.
"""

from __future__ import annotations

from dataclasses import dataclass

_EPS = 1e-9


@dataclass(frozen=True)
class Asym:
    """Behaviour ``~ C t^alpha log(1/t)^beta`` (C > 0) as ``t -> 0+``."""

    alpha: float
    beta: float = 0.0

    def __mul__(self, other: "Asym") -> "Asym":
        return Asym(self.alpha + other.alpha, self.beta + other.beta)

    def __pow__(self, p: float) -> "Asym":
        return Asym(self.alpha * p, self.beta * p)

    def integrable(self) -> bool:
        """Whether ``int_0 t^alpha log(1/t)^beta dt`` converges."""
        if self.alpha > -1 + _EPS:
            return True
        return abs(self.alpha + 1) <= _EPS and self.beta < -1 - _EPS

    def bounded(self) -> bool:
        if self.alpha > _EPS:
            return True
        return abs(self.alpha) <= _EPS and self.beta <= _EPS

    def primitive(self) -> "Asym":
        """Class of ``int_0^t``; only meaningful when integrable."""
        if not self.integrable():
            raise ValueError(f"{self} is not integrable at 0")
        if self.alpha > -1 + _EPS:
            return Asym(self.alpha + 1, self.beta)
        return Asym(0.0, self.beta + 1)

    def harsher(self, other: "Asym | None") -> "Asym":
        """The more singular of two classes."""
        if other is None:
            return self
        if abs(self.alpha - other.alpha) > _EPS:
            return self if self.alpha < other.alpha else other
        return self if self.beta >= other.beta else other


def harshest(*classes: Asym | None) -> Asym | None:
    out = None
    for c in classes:
        if c is not None:
            out = c.harsher(out)
    return out


def is_unbounded(c: Asym | None) -> bool:
    return c is not None and not c.bounded()
