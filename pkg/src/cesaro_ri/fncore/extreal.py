"""Nonnegative extended reals carrying numerical provenance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Finite:
    value: float
    err: float = 0.0
    approximate: bool = False

    def __post_init__(self):
        if not (self.err >= 0):
            raise ValueError(f"err_bound must be nonnegative, got {self.err}")

    @property
    def lo(self) -> float:
        return self.value - self.err

    @property
    def hi(self) -> float:
        return self.value + self.err


@dataclass(frozen=True)
class Divergent:
    """Certified ``+inf``; ``route`` names the rule that decided it."""

    route: str = "probe"


@dataclass(frozen=True)
class Unknown:
    reason: str


ExtReal = Union[Finite, Divergent, Unknown]


def is_finite(v: ExtReal) -> bool:
    return isinstance(v, Finite)


def scale(v: ExtReal, k: float) -> ExtReal:
    if isinstance(v, Finite):
        return Finite(k * v.value, abs(k) * v.err, v.approximate)
    if isinstance(v, Divergent) and k == 0:
        return Unknown("0 * inf")
    return v


def add(a: ExtReal, b: ExtReal) -> ExtReal:
    if isinstance(a, Unknown):
        return a
    if isinstance(b, Unknown):
        return b
    if isinstance(a, Divergent):
        return a
    if isinstance(b, Divergent):
        return b
    return Finite(a.value + b.value, a.err + b.err, a.approximate or b.approximate)


def agree(a: ExtReal, b: ExtReal, rel: float = 0.0) -> bool | None:
    """Whether two outcomes agree within combined error; ``None`` if undecidable."""
    if isinstance(a, Unknown) or isinstance(b, Unknown):
        return None
    if isinstance(a, Divergent) or isinstance(b, Divergent):
        return isinstance(a, Divergent) and isinstance(b, Divergent)
    slack = a.err + b.err + rel * max(abs(a.value), abs(b.value))
    return abs(a.value - b.value) <= slack


def as_float(v: ExtReal) -> float:
    if isinstance(v, Finite):
        return v.value
    if isinstance(v, Divergent):
        return math.inf
    return math.nan


def to_dict(v: ExtReal) -> dict:
    if isinstance(v, Finite):
        return {"kind": "finite", "value": float(f"{v.value:.12g}"),
                "err_bound": float(f"{v.err:.3g}"), "approximate": v.approximate}
    if isinstance(v, Divergent):
        return {"kind": "divergent", "route": v.route}
    return {"kind": "unknown", "reason": v.reason}
