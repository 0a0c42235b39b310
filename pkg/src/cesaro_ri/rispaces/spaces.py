"""Rearrangement-invariant space descriptors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..fncore.extreal import ExtReal, Finite, Unknown
from .dilation import DilationIndices, dilation_indices
from .phi import QuasiConcave, Validation, check_concave, ratio_psi


class RISpace:
    """Base class of the supported families."""


@dataclass(frozen=True)
class Lp(RISpace):
    p: float
    dual_shortcut: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not (self.p >= 1):
            raise ValueError("Lp needs p >= 1")

    @property
    def name(self):
        return "L^inf" if math.isinf(self.p) else f"L^{self.p:g}"


@dataclass(frozen=True)
class Lorentz(RISpace):
    """``Lambda(phi)``; the concavity probe result is kept, not enforced.

    The catalog's ``log(e/t)^(-1/p)`` is concave only on ``(0, e^{-1/p}]``,
    which is all the theory needs, so a failed probe is recorded in
    ``concavity`` rather than raised.
    """

    phi: QuasiConcave
    concavity: Validation = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.concavity is None:
            object.__setattr__(self, "concavity", check_concave(self.phi))

    @property
    def name(self):
        return f"Lambda({self.phi.name})"


@dataclass(frozen=True)
class Marcinkiewicz(RISpace):
    """``M(phi)``; ``use_equiv_norm`` switches to ``sup phi(t) f*(t)``."""

    phi: QuasiConcave
    use_equiv_norm: bool = False

    def __post_init__(self):
        if self.use_equiv_norm:
            d = dilation_indices(self.phi)
            if not (d.stable and d.delta < 1 - 2 * max(d.stderr, 1e-3)):
                raise ValueError(
                    f"equivalent Marcinkiewicz norm needs delta_phi < 1 (got {d.delta:.4g})")

    @property
    def name(self):
        return f"M({self.phi.name}){'~' if self.use_equiv_norm else ''}"


def fundamental(X: RISpace, t: float) -> float:
    """``||chi_[0,t]||_X``."""
    if not (0 < t <= 1):
        raise ValueError("t must lie in (0, 1]")
    if isinstance(X, Lp):
        return 1.0 if math.isinf(X.p) else t ** (1.0 / X.p)
    return float(X.phi.eval(t))


def associate(X: RISpace) -> RISpace:
    """Associate space: ``Lambda(phi)' = M(t/phi)`` and ``M(phi)' = Lambda(t/phi)``.

    For ``Lp`` the classical conjugate exponent is returned with
    ``dual_shortcut`` set.
    """
    if isinstance(X, Lp):
        q = math.inf if X.p == 1 else (1.0 if math.isinf(X.p) else X.p / (X.p - 1))
        return Lp(q, dual_shortcut=True)
    if isinstance(X, Lorentz):
        return Marcinkiewicz(ratio_psi(X.phi))
    if isinstance(X, Marcinkiewicz):
        return Lorentz(ratio_psi(X.phi))
    raise TypeError(f"unsupported space {X!r}")


def boyd_upper(X: RISpace) -> ExtReal:
    """Upper Boyd index: ``1/p`` for Lp, ``delta_phi`` on the Lorentz/Marcinkiewicz catalog."""
    if isinstance(X, Lp):
        return Finite(0.0 if math.isinf(X.p) else 1.0 / X.p, 0.0)
    d: DilationIndices = dilation_indices(X.phi)
    if not d.stable:
        return Unknown(f"dilation slopes spread {d.stderr:.3g} > 0.02")
    return Finite(d.delta, d.stderr, True)
