"""Executable checks of the main statements about Cesàro spaces.

Each check returns a :class:`Certificate` whose verdict is ``"pass"``,
``"fail"`` or ``"unknown"``, together with the numbers that decided it and the
thresholds that were applied. A verdict is only ``pass``/``fail`` when every
piece of evidence it relies on is Finite or Divergent as needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .cesaro import cesaro, cesaro_space_norm, is_divergent
from .fncore.asym import Asym
from .fncore.expr import FunctionExpr, LogRecip, Power, Sampled, mirrored_power
from .fncore.extreal import Divergent, ExtReal, Finite, Unknown, agree, to_dict
from .fncore.ops import cumulative_rearranged, integrate, rearrange, rearrangement_grid
from .fncore.points import Points
from .rispaces.dilation import dilation_indices
from .rispaces.norms import SUP_CEILING, SUP_STABLE, norm
from .rispaces.phi import PowerPhi, QuasiConcave, ratio_psi
from .rispaces.spaces import Lorentz, Lp, Marcinkiewicz, RISpace, associate
from .vmeasure import (FULL, density_norm_class, density_norms, lorentz_total_variation,
                       variation, weighted_l1_norm)

Evidence = Union[ExtReal, float, bool, str]

EIGEN_TOL = 1e-10
WITNESS_BAND = 0.25
FACTOR_BAND = (1.0 / 8.0, 8.0)
DEFECT_FLOOR = 0.5
INDEX_MARGIN = 0.02
AGREE_REL = 1e-8


@dataclass(frozen=True)
class Certificate:
    statement_id: str
    verdict: str
    evidence: tuple[tuple[str, Evidence], ...] = ()
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in ("pass", "fail", "unknown"):
            raise ValueError(f"bad verdict {self.verdict!r}")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def get(self, label: str) -> Evidence:
        for k, v in self.evidence:
            if k == label:
                return v
        raise KeyError(label)

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, (Finite, Divergent, Unknown)):
                return to_dict(v)
            if isinstance(v, float):
                return float(f"{v:.12g}")
            return v

        return {"statement_id": self.statement_id, "verdict": self.verdict,
                "evidence": [{"label": k, "value": enc(v)} for k, v in self.evidence],
                "tolerances": dict(self.tolerances)}


def _verdict(ok) -> str:
    return "unknown" if ok is None else ("pass" if ok else "fail")


def _probe_grid(n: int = 400) -> Points:
    return Points.at(np.concatenate([np.geomspace(1e-12, 0.5, n // 2),
                                     1.0 - np.geomspace(0.5, 1e-12, n // 2)[1:]]))


# eigenfunctions -------------------------------------------------------------

def cert_eigen(alpha: float, tol: float = EIGEN_TOL) -> Certificate:
    """``C(x^alpha) = x^alpha / (alpha + 1)``, checked symbolically and by quadrature."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    pts = _probe_grid()
    target = Power(1.0 / (alpha + 1.0), alpha).eval(pts)
    image = cesaro(Power(1.0, alpha))
    sym = float(np.max(np.abs(image.eval(pts) - target)))
    xs = np.array([1e-9, 1e-4, 0.1, 0.37, 0.5, 0.9, 1.0])
    quad_dev = 0.0
    for x in xs:
        r = integrate(Power(1.0, alpha), 0.0, float(x), 1e-13)
        if not isinstance(r, Finite):
            return Certificate("eigen", "unknown", (("quadrature", r),), {"sup_abs": tol})
        quad_dev = max(quad_dev, float(abs(r.value / x - x ** alpha / (alpha + 1))))
    ok = sym <= tol and quad_dev <= tol
    return Certificate("eigen", _verdict(ok),
                       (("alpha", float(alpha)), ("eigenvalue", 1.0 / (alpha + 1)),
                        ("sup_dev_symbolic", sym), ("sup_dev_quadrature", quad_dev)),
                       {"sup_abs": tol})


# [C, L1] = L1(log(1/t)) -----------------------------------------------------

def cert_fubini_l1(f: FunctionExpr, tol: float = 1e-10) -> Certificate:
    """Both sides of ``||C f||_1 = int f(y) log(1/y) dy``."""
    a = cesaro_space_norm(Lp(1), f, tol)
    b = weighted_l1_norm(Lp(1), f, tol)
    ok = agree(a, b, AGREE_REL)
    if ok and isinstance(a, Divergent):
        ok = True
    return Certificate("fubini_l1", _verdict(ok),
                       (("cesaro_norm", a), ("weighted_l1", b)),
                       {"relative_slack": AGREE_REL, "quad_tol": tol})


# variation of the Lorentz measure --------------------------------------------

def cert_variation_identity(phi: QuasiConcave, tol: float = 1e-10) -> Certificate:
    """``|m|([0,1])`` three ways: double integral, log weight, Lorentz norm of log."""
    X = Lorentz(phi)
    routes = (("double_integral", variation(X, FULL, tol)),
              ("log_weight", lorentz_total_variation(phi, tol)),
              ("lorentz_norm_log", norm(X, LogRecip(1.0), tol)))
    vals = [v for _, v in routes]
    if all(isinstance(v, Divergent) for v in vals):
        ok = True
    elif any(isinstance(v, Unknown) for v in vals):
        ok = None
    else:
        pair = [agree(vals[i], vals[j], AGREE_REL) for i in range(3) for j in range(i + 1, 3)]
        ok = None if None in pair else all(pair)
    return Certificate("variation_identity", _verdict(ok), routes,
                       {"relative_slack": AGREE_REL, "quad_tol": tol})


# the non-r.i. witness ---------------------------------------------------------

def witness(phi: QuasiConcave) -> FunctionExpr:
    """``f(t) = phi'(1-t) / phi(1-t)^{3/2}``, exact for power functions."""
    if not isinstance(phi, PowerPhi):
        raise NotImplementedError("the witness has an exact form only for power phi")
    a = phi.a
    return mirrored_power(a, -1.0 - a / 2.0)


def cert_not_ri(phi: QuasiConcave, band: float = WITNESS_BAND, tol: float = 1e-8) -> Certificate:
    """``f`` lies in ``[C, Lambda(phi)]`` while ``f*`` does not."""
    tols = {"relative_band": band, "quad_tol": tol}
    try:
        f = witness(phi)
    except NotImplementedError as exc:
        return Certificate("not_ri", "unknown", (("witness", str(exc)),), tols)
    fs = rearrange(f)
    c_star = cesaro(fs)
    star = Divergent("marker") if is_divergent(c_star) else norm(Lorentz(phi), c_star, tol)
    value = cesaro_space_norm(Lorentz(phi), f, tol)
    target = 2.0 * math.sqrt(float(phi.eval(np.array([1.0]))[0]))
    ev = (("norm_C_f_star", star), ("norm_C_f", value), ("target", target))
    if isinstance(value, Unknown) or isinstance(star, Unknown):
        return Certificate("not_ri", "unknown", ev, tols)
    in_band = isinstance(value, Finite) and abs(value.value - target) <= band * target
    ok = isinstance(star, Divergent) and in_band
    return Certificate("not_ri", _verdict(ok), ev + (("within_band", in_band),), tols)


# AL-space dichotomy ---------------------------------------------------------

def _indices_ok(phi: QuasiConcave):
    d = dilation_indices(phi)
    ok = d.stable and d.gamma > INDEX_MARGIN and d.delta < 1.0 - INDEX_MARGIN
    return ok, d


def _y_grid(y_min: float, n: int) -> np.ndarray:
    left = np.geomspace(y_min, 0.5, n)
    right = 1.0 - np.geomspace(0.5, y_min, n)[1:]
    return np.concatenate([left, right])


def _quotient_profile(X: RISpace, y_min: float, n: int):
    """``h(y) = ||F_y|| / (1 - y)`` on a two-sided graded grid."""
    ys = _y_grid(y_min, n)
    return ys, density_norms(X, ys) / (1.0 - ys)


def _distribution_of_profile(ys: np.ndarray, h: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """``|{h > tau}|`` for a profile that decreases then increases."""
    k = int(np.argmin(h))
    out = np.zeros_like(taus)
    # decreasing branch y in [y_0, y_k]: measure y*(tau) where h crosses tau, in log-log
    ly, lh = np.log(ys[: k + 1]), np.log(h[: k + 1])
    cross = np.exp(np.interp(-np.log(taus), -lh, ly))
    out += np.where(taus < h[k], 0.0, np.where(taus >= h[0], ys[0], cross))
    # increasing branch: the measure is 1 - y where h crosses tau, in log coordinates of 1-y
    lyc, lh2 = np.log(1.0 - ys[k:]), np.log(h[k:])
    cross2 = np.exp(np.interp(np.log(taus), lh2, -(-lyc)))
    out += np.where(taus < h[k], 0.0, np.where(taus >= h[-1], 1.0 - ys[-1], cross2))
    return np.where(taus < h[k], 1.0, out)


def _lorentz_al_sup(X: Lorentz, y_min: float, n: int) -> float:
    ys, h = _quotient_profile(X, y_min, n)
    taus = np.sort(h)
    t = np.clip(_distribution_of_profile(ys, h, taus), 1e-300, 1.0)
    return float(np.max(t / X.phi.eval(t) * taus))


def cert_al(X: RISpace, tol: float = 1e-8) -> Certificate:
    """Whether ``[C, X]`` is order isomorphic to an AL-space."""
    if not isinstance(X, (Lorentz, Marcinkiewicz)):
        return Certificate("al", "unknown", (("space", "only Lorentz or Marcinkiewicz"),), {})
    ok_idx, d = _indices_ok(X.phi)
    ev = [("gamma", d.gamma), ("delta", d.delta)]
    tols = {"index_margin": INDEX_MARGIN, "sup_stable": SUP_STABLE, "sup_ceiling": SUP_CEILING}
    if not ok_idx:
        ev.append(("indices", "need 0 < gamma <= delta < 1"))
        return Certificate("al", "unknown", tuple(ev), tols)
    n = max(200, int(60 * math.log10(1.0 / tol)))
    if isinstance(X, Lorentz):
        sups = [_lorentz_al_sup(X, y_min, n) for y_min in (1e-4, 1e-8, 1e-12)]
        fine = _lorentz_al_sup(X, 1e-12, 2 * n)
        ev += [("sup_y_min_1e-4", sups[0]), ("sup_y_min_1e-8", sups[1]),
               ("sup_y_min_1e-12", sups[2]), ("sup_refined", fine)]
        stable = (abs(fine - sups[2]) <= SUP_STABLE * fine
                  and abs(sups[2] - sups[1]) <= SUP_STABLE * fine and fine < SUP_CEILING)
        growing = sups[2] > 1.5 * sups[1] > 2.25 * sups[0]
        if stable and not growing:
            return Certificate("al", "pass", tuple(ev), tols)
        return Certificate("al", "fail" if growing else "unknown", tuple(ev), tols)
    psi = ratio_psi(X.phi)
    h_class = density_norm_class(X).harsher(X.phi.klass() * Asym(-1.0, 0.0))
    integrand = h_class * psi.deriv_class()
    ys = np.array([1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    lower = float(np.min(density_norms(X, ys) / (X.phi.eval(ys) / (2.0 * ys))))
    ev += [("profile_class", f"t^{h_class.alpha:g} log^{h_class.beta:g}"),
           ("lower_bound_ratio_min", lower)]
    if not integrand.integrable():
        ev.append(("psi_integral", Divergent("class")))
        return Certificate("al", "fail" if lower >= 1.0 else "unknown", tuple(ev), tols)
    ys_, h = _quotient_profile(X, 1e-12, n)
    taus = np.sort(h)
    lam = _distribution_of_profile(ys_, h, taus)
    val = float(taus[0] * psi.eval(np.array([1.0]))[0]
                + np.sum(np.diff(taus) * 0.5 * (psi.eval(lam[1:]) + psi.eval(lam[:-1]))))
    ev.append(("psi_integral", Finite(val, 0.0, True)))
    return Certificate("al", "pass", tuple(ev), tols)


# strict containment in the Marcinkiewicz case ------------------------------

def reciprocal_phi(phi: QuasiConcave) -> FunctionExpr:
    """``1/phi`` as a catalog function."""
    if isinstance(phi, PowerPhi):
        return Power(1.0, -phi.a)
    grid = rearrangement_grid()
    v = 1.0 / phi.eval(grid)
    return Sampled(tuple(grid), tuple(0.5 * (v[:-1] + v[1:])),
                   tuple(0.5 * np.abs(v[:-1] - v[1:])), True, phi.klass() ** -1.0)


def cert_marcinkiewicz_strict(phi: QuasiConcave, band=FACTOR_BAND,
                              tol: float = 1e-8) -> Certificate:
    """``1/phi`` is in ``M(phi)`` but not in its absolutely continuous part."""
    d = dilation_indices(phi)
    tols = {"factor_band": list(band), "defect_floor": DEFECT_FLOOR, "index_margin": INDEX_MARGIN}
    ev = [("delta", d.delta)]
    if not (d.stable and d.delta < 1.0 - INDEX_MARGIN):
        ev.append(("indices", "need delta < 1"))
        return Certificate("marcinkiewicz_strict", "unknown", tuple(ev), tols)
    r = reciprocal_phi(phi)
    member = norm(Marcinkiewicz(phi, use_equiv_norm=True), r, tol)
    ts = np.geomspace(1e-8, 1e-2, 48)
    defect = []
    for t in ts:
        c = cumulative_rearranged(r, float(t), tol)
        if not isinstance(c, Finite):
            return Certificate("marcinkiewicz_strict", "unknown",
                               tuple(ev + [("cumulative", c)]), tols)
        defect.append(float(phi.eval(np.array([t]))[0]) / t * c.value)
    defect = np.asarray(defect)
    liminf_coarse, liminf_fine = float(defect[:24].min()), float(defect[:8].min())
    settled = abs(liminf_fine - liminf_coarse) <= SUP_STABLE * abs(liminf_coarse)
    pts = _probe_grid()
    ratio = cesaro(r).eval(pts) / r.eval(pts)
    f_lo, f_hi = float(ratio.min()), float(ratio.max())
    ev += [("norm_in_M", member), ("defect_liminf", liminf_fine),
           ("factor_min", f_lo), ("factor_max", f_hi)]
    if isinstance(member, Unknown) or not settled:
        return Certificate("marcinkiewicz_strict", "unknown", tuple(ev), tols)
    ok = (isinstance(member, Finite) and liminf_fine >= DEFECT_FLOOR
          and band[0] <= f_lo and f_hi <= band[1])
    return Certificate("marcinkiewicz_strict", _verdict(ok), tuple(ev), tols)


# X inside L1(|m_X|) -----------------------------------------------------------

def density_profile(X: RISpace, n: int = 600, y_min: float = 1e-12) -> Sampled:
    """Decreasing Sampled of ``y -> ||F_y||_X`` with its class below ``y_min``."""
    grid = np.concatenate([np.geomspace(y_min, 0.5, n), np.linspace(0.5, 1.0, n // 4)[1:]])
    v = density_norms(X, grid)
    v[-1] = 0.0
    return Sampled(tuple(grid), tuple(0.5 * (v[:-1] + v[1:])),
                   tuple(0.5 * np.abs(v[:-1] - v[1:])), True, density_norm_class(X))


def cert_x_in_l1var(X: RISpace, tol: float = 1e-8) -> Certificate:
    """``X`` sits inside ``L1(|m_X|)`` iff ``y -> ||F_y||_X`` lies in ``X'``."""
    Xa = associate(X)
    val = norm(Xa, density_profile(X), tol)
    ev = [("associate_norm", val)]
    if isinstance(X, Marcinkiewicz):
        ys = np.geomspace(1e-6, 0.5, 12)
        ratio = float(np.min(density_norms(X, ys) * 2.0 * ys / X.phi.eval(ys)))
        ev.append(("lower_bound_ratio_min", ratio))
    ok = None if isinstance(val, Unknown) else isinstance(val, Finite)
    return Certificate("x_in_l1var", _verdict(ok), tuple(ev), {"quad_tol": tol})


# registry ---------------------------------------------------------------------

def default_suite() -> dict[str, Callable[[], Certificate]]:
    """Named certificate runs used by ``check all``."""
    return {
        "al": lambda: cert_al(Lorentz(PowerPhi(0.5))),
        "eigen": lambda: cert_eigen(1.0),
        "fubini_l1": lambda: cert_fubini_l1(Power(1.0, 1.0)),
        "marcinkiewicz_strict": lambda: cert_marcinkiewicz_strict(PowerPhi(0.5)),
        "not_ri": lambda: cert_not_ri(PowerPhi(0.5)),
        "variation_identity": lambda: cert_variation_identity(PowerPhi(0.5)),
        "x_in_l1var": lambda: cert_x_in_l1var(Lorentz(PowerPhi(0.5))),
    }
