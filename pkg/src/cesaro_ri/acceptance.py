"""The acceptance table: every numbered criterion as a callable check.

Shared by ``cesaro-ri report`` and the test suite so both apply the same
tolerances. Each check returns a :class:`CriterionResult`; nothing here is
loosened to make a criterion pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .certificates import (cert_al, cert_eigen, cert_fubini_l1, cert_marcinkiewicz_strict,
                           cert_not_ri, cert_variation_identity, cert_x_in_l1var)
from .fncore.expr import Step
from .fncore.extreal import Divergent, Finite
from .fncore.ops import distribution_many, rearrange
from .rispaces.dilation import dilation_indices
from .rispaces.norms import norm
from .rispaces.phi import LogPhi, PowerPhi, validate_phi
from .rispaces.spaces import Lorentz, Lp, Marcinkiewicz
from .vmeasure import density, density_norm, density_rearranged, finite_variation

SEED = 20240607


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number:2d} {self.title}: {self.detail}"


def random_step(rng: np.random.Generator, max_cells: int = 8, scale: float = 3.0) -> Step:
    """A random nonnegative step function on [0, 1]."""
    n = int(rng.integers(1, max_cells + 1))
    inner = np.sort(rng.choice(np.arange(1, 1000), size=n - 1, replace=False)) / 1000.0
    vals = np.round(rng.uniform(0.0, scale, size=n), 6)
    return Step(tuple([0.0, *inner.tolist(), 1.0]), tuple(vals.tolist()))


def step_corpus(n: int, seed: int = SEED) -> list[Step]:
    rng = np.random.default_rng(seed)
    return [random_step(rng) for _ in range(n)]


def crit_eigen() -> CriterionResult:
    certs = {a: cert_eigen(a) for a in (0.0, 0.5, 1.0, 2.0)}
    worst = max(max(c.get("sup_dev_symbolic"), c.get("sup_dev_quadrature")) for c in certs.values())
    ok = all(c.passed for c in certs.values())
    return CriterionResult(1, "eigenfunctions of C", ok,
                           f"max |C(x^a) - x^a/(a+1)| = {worst:.3g} (limit 1e-10)", {"worst": worst})


def crit_density_rearrangement() -> CriterionResult:
    taus = np.concatenate([np.geomspace(1e-3, 1e3, 241), [0.0, 1.0, 2.0, 10.0]])
    worst = 0.0
    for y in (0.1, 0.5, 0.9):
        a = distribution_many(density(y), taus)
        b = distribution_many(density_rearranged(y), taus)
        worst = max(worst, float(np.max(np.abs(a - b))))
    return CriterionResult(2, "density rearrangement", worst <= 1e-12,
                           f"max |lambda_F - lambda_F*| = {worst:.3g} (limit 1e-12)", {"worst": worst})


def crit_variation_identity() -> CriterionResult:
    rel, oracle_err = 0.0, 0.0
    ok = True
    for a in (0.25, 0.5, 1.0):
        c = cert_variation_identity(PowerPhi(a))
        vals = [v for _, v in c.evidence]
        if not all(isinstance(v, Finite) for v in vals):
            ok = False
            continue
        xs = [v.value for v in vals]
        rel = max(rel, (max(xs) - min(xs)) / max(xs))
        if a in (0.5, 1.0):
            oracle_err = max(oracle_err, max(abs(x - 1.0 / a) for x in xs))
    ok = ok and rel <= 1e-4 and oracle_err <= 1e-6
    return CriterionResult(3, "variation identity", ok,
                           f"route spread {rel:.3g} (limit 1e-4), oracle error {oracle_err:.3g} (limit 1e-6)",
                           {"route_spread": rel, "oracle_err": oracle_err})


def crit_phase_boundary() -> CriterionResult:
    expect = {0.25: True, 0.5: True, 0.75: True, 1.0: False, 2.0: False}
    got = {p: finite_variation(Lorentz(LogPhi(p))).verdict for p in expect}
    ok = got == expect
    desc = ", ".join(f"p={p:g}:{'unknown' if v is None else str(v).lower()}" for p, v in got.items())
    return CriterionResult(4, "finite-variation phase boundary", ok, desc)


def crit_fubini() -> CriterionResult:
    certs = [cert_fubini_l1(f) for f in step_corpus(20, SEED + 5)]
    n_pass = sum(c.passed for c in certs)
    return CriterionResult(5, "[C,L1] weight identity", n_pass == 20, f"{n_pass}/20 random steps agree")


def crit_not_ri() -> CriterionResult:
    parts, ok = [], True
    for a in (0.5, 0.75, 1.0):
        c = cert_not_ri(PowerPhi(a))
        v = c.get("norm_C_f")
        shown = f"{v.value:.4f}" if isinstance(v, Finite) else type(v).__name__
        div = isinstance(c.get("norm_C_f_star"), Divergent)
        parts.append(f"a={a:g}: C(f*) {'divergent' if div else 'finite'}, ||Cf||={shown}")
        ok = ok and c.passed
    return CriterionResult(6, "non-r.i. witness", ok, "; ".join(parts) + " (band [1.5, 2.5])")


def crit_al() -> CriterionResult:
    ok, parts = True, []
    for a in (0.5, 0.75):
        for X, want in ((Lorentz(PowerPhi(a)), "pass"), (Marcinkiewicz(PowerPhi(a)), "fail")):
            v1, v2 = cert_al(X, 1e-8).verdict, cert_al(X, 1e-9).verdict
            ok = ok and v1 == want and v2 == want
            parts.append(f"{X.name}:{v1}/{v2}")
    return CriterionResult(7, "AL dichotomy", ok, ", ".join(parts))


def crit_strict() -> CriterionResult:
    c = cert_marcinkiewicz_strict(PowerPhi(0.5))
    dev = max(abs(c.get("factor_min") - 2.0), abs(c.get("factor_max") - 2.0))
    ok = c.passed and dev <= 1e-10
    return CriterionResult(8, "strict containment witness", ok,
                           f"verdict {c.verdict}, |C(t^-1/2)/t^-1/2 - 2| = {dev:.3g} (limit 1e-10)")


def catalog_spaces():
    out = [Lp(1), Lp(1.5), Lp(2), Lp(4), Lp(math.inf)]
    for a in (0.25, 0.5, 0.75, 1.0):
        out += [Lorentz(PowerPhi(a)), Marcinkiewicz(PowerPhi(a))]
    for p in (0.5, 1.0, 2.0, 4.0):
        out += [Lorentz(LogPhi(p)), Marcinkiewicz(LogPhi(p))]
    return out


def _is_ri(X) -> bool:
    return isinstance(X, Lp) or validate_phi(X.phi).ok


def crit_l1_exclusion() -> CriterionResult:
    worst, bad = math.inf, []
    spaces = catalog_spaces()
    skipped = [X.name for X in spaces if not _is_ri(X)]
    for X in (X for X in spaces if _is_ri(X)):
        for y in (1e-1, 1e-2, 1e-3, 1e-4):
            v = density_norm(X, y)
            lb = math.log(1.0 / y)
            if not isinstance(v, Finite) or v.value + v.err < lb * (1 - 1e-12):
                bad.append(f"{X.name}@{y:g}")
            elif isinstance(v, Finite):
                worst = min(worst, v.value / lb)
    c = cert_x_in_l1var(Lp(1))
    ok = not bad and c.verdict == "fail"
    detail = f"min ||F_y||/log(1/y) = {worst:.4f}; cert_x_in_l1var(L^1) = {c.verdict}"
    if bad:
        detail += f"; violations {bad[:4]}"
    if skipped:
        detail += f"; skipped (phi/t not decreasing) {', '.join(skipped)}"
    return CriterionResult(9, "L1 exclusion", ok, detail)


def crit_dilation() -> CriterionResult:
    worst = 0.0
    for phi, want in [(PowerPhi(a), a) for a in (0.25, 0.5, 0.75)] + [(LogPhi(1.0), 0.0)]:
        d = dilation_indices(phi)
        worst = max(worst, abs(d.gamma - want), abs(d.delta - want))
    return CriterionResult(10, "dilation indices", worst <= 0.02,
                           f"max index error {worst:.3g} (limit 0.02)")


def property_failures(n: int = 200, seed: int = SEED) -> dict[str, int]:
    """Counts of failed property checks over a random step corpus."""
    rng = np.random.default_rng(seed)
    taus = np.linspace(0.0, 3.0, 31)
    spaces = (Lp(2), Lorentz(PowerPhi(0.5)), Marcinkiewicz(PowerPhi(0.5)))
    fails = {"equimeasurable": 0, "idempotent": 0, "lattice": 0, "homogeneous": 0, "embedding": 0}
    for _ in range(n):
        f = random_step(rng)
        fs = rearrange(f)
        if np.max(np.abs(distribution_many(f, taus) - distribution_many(fs, taus))) > 1e-12:
            fails["equimeasurable"] += 1
        if rearrange(fs) != fs:
            fails["idempotent"] += 1
        g = Step(f.breaks_, tuple(v + float(rng.uniform(0, 1)) for v in f.values))
        k = float(rng.uniform(0.1, 5.0))
        fk = Step(f.breaks_, tuple(k * v for v in f.values))
        for X in spaces:
            nf, ng, nk = norm(X, f).value, norm(X, g).value, norm(X, fk).value
            if nf > ng * (1 + 1e-9) + 1e-12:
                fails["lattice"] += 1
            if abs(nk - k * nf) > 1e-9 * max(1.0, k * nf):
                fails["homogeneous"] += 1
        phi = PowerPhi(float(rng.uniform(0.1, 1.0)))
        if norm(Marcinkiewicz(phi), f).value > norm(Lorentz(phi), f).value * (1 + 1e-9) + 1e-12:
            fails["embedding"] += 1
    return fails


def crit_properties() -> CriterionResult:
    fails = property_failures()
    total = sum(fails.values())
    return CriterionResult(11, "property suites", total == 0,
                           f"{total} failures over 200 random steps " +
                           ", ".join(f"{k}={v}" for k, v in fails.items()))


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: crit_eigen, 2: crit_density_rearrangement, 3: crit_variation_identity,
    4: crit_phase_boundary, 5: crit_fubini, 6: crit_not_ri, 7: crit_al, 8: crit_strict,
    9: crit_l1_exclusion, 10: crit_dilation, 11: crit_properties,
}


def run_all() -> list[CriterionResult]:
    return [CRITERIA[k]() for k in sorted(CRITERIA)]
