"""Graded adaptive quadrature on subintervals of [0, 1].

Segments touching 0 or 1 are integrated in the logarithmic coordinate
``u = -log(distance to the endpoint)``. The mesh there is geometric with
ratio 1/2 (unit ``log 2`` cells in ``u``) for 48 cells, followed by cells
that double in ``u`` so that slowly varying ``log``-type tails are covered
out to ``u ~ 1e13``. Whatever lies beyond the last finite cell is
extrapolated geometrically from the last doubling cells. Every cell uses a
10-point Gauss-Legendre rule, with the error estimated by halving; cells are
refined globally until the summed estimate meets the tolerance.

Integrands receive a :class:`Points` batch and may return a 2-D array
``(batch, n)`` to integrate a whole family at once on a common mesh.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .points import Points

_N = 10
_GX, _GW = np.polynomial.legendre.leggauss(_N)
_NODES = np.concatenate([_GX, (_GX - 1) / 2, (_GX + 1) / 2])

PLAIN, NEAR0, NEAR1 = 0, 1, 2
LN2 = math.log(2.0)
LINEAR_CELLS = 48
DOUBLING_CELLS = 40
_ROUNDOFF = 64 * np.finfo(float).eps


def work_budget() -> int:
    """Maximum number of cells one quadrature may evaluate."""
    return int(os.environ.get("CESARO_RI_BUDGET", "200000"))


@dataclass
class QuadResult:
    value: np.ndarray
    err: np.ndarray
    status: list[str]

    def scalar(self) -> tuple[float, float, str]:
        return float(self.value[0]), float(self.err[0]), self.status[0]


def _build_points(s: np.ndarray, coord: np.ndarray) -> Points:
    x = np.empty_like(s)
    xc = np.empty_like(s)
    lx = np.empty_like(s)
    lxc = np.empty_like(s)
    jac = np.empty_like(s)
    jx = np.empty_like(s)
    for code, make in ((PLAIN, Points.at), (NEAR0, Points.near0), (NEAR1, Points.near1)):
        m = coord == code
        if not m.any():
            continue
        p = make(s[m])
        x[m], xc[m], lx[m], lxc[m] = p.x, p.xc, p.lx, p.lxc
        jac[m] = p.jac
        jx[m] = p.jac_over_x()
    return Points(x, xc, lx, lxc, jac, jx)


def _eval_cells(fn, lo, hi, coord, batch, weighted=False):
    mid = (lo + hi) / 2
    half = (hi - lo) / 2
    s = mid[:, None] + half[:, None] * _NODES[None, :]
    pts = _build_points(s.ravel(), np.repeat(coord, 3 * _N))
    with np.errstate(all="ignore"):
        v = np.asarray(fn(pts), dtype=float)
        if v.ndim == 1:
            v = v[None, :]
        if not weighted:
            v = v * pts.jac
            v = np.where(pts.jac == 0, 0.0, v)
    if v.shape[0] != batch:
        v = np.broadcast_to(v, (batch, v.shape[1]))
    v = v.reshape(batch, lo.size, 3 * _N)
    with np.errstate(all="ignore"):
        whole = (v[..., :_N] @ _GW) * half
        halves = (v[..., _N:2 * _N] @ _GW + v[..., 2 * _N:] @ _GW) * (half / 2)
        mass = (np.abs(v[..., _N:]) @ np.concatenate([_GW, _GW])) * (half / 2)
        err = np.abs(whole - halves)
    err = np.where(err <= _ROUNDOFF * mass, 0.0, err)
    return halves, err, mass


def _tail(g: np.ndarray, scale: float) -> tuple[float, float, str]:
    """Extrapolate the sum beyond the last doubling cell."""
    if g.size == 0:
        return math.inf, math.inf, "growing"
    tiny = 1e-300 + 1e-17 * scale
    if abs(g[-1]) <= tiny:
        return 0.0, abs(g[-1]), "ok"
    if g.size < 3:
        return 0.0, math.inf, "undecided"
    if g[-3] > 0 and g[-1] >= g[-2] >= g[-3]:
        return math.inf, math.inf, "growing"
    if g[-2] == 0 or g[-3] == 0:
        return 0.0, math.inf, "undecided"
    r1, r0 = g[-1] / g[-2], g[-2] / g[-3]
    if not (0 <= r1 < 1 and 0 <= r0 < 1):
        return 0.0, math.inf, "growing" if r1 >= 1 else "undecided"
    t1 = g[-1] * r1 / (1 - r1)
    t0 = g[-1] * r0 / (1 - r0)
    return t1, abs(t1 - t0), "ok"


def _segments(a, b, breaks):
    cuts = sorted({a, b} | {float(p) for p in breaks if a < p < b})
    if len(cuts) == 2 and a == 0.0 and b == 1.0:
        cuts = [0.0, 0.5, 1.0]
    return list(zip(cuts[:-1], cuts[1:]))


def _initial_cells(segs, graded):
    lo, hi, coord, seg, grp = [], [], [], [], []
    graded_segs = []
    for k, (p, q) in enumerate(segs):
        if p == 0.0 and graded:
            s0 = -math.log(q)
            code = NEAR0
        elif q == 1.0 and graded:
            s0 = -math.log1p(-p)
            code = NEAR1
        else:
            e = np.linspace(p, q, 5)
            lo.append(e[:-1]); hi.append(e[1:])
            coord.append(np.full(4, PLAIN)); seg.append(np.full(4, k)); grp.append(np.full(4, -1))
            continue
        lin = s0 + LN2 * np.arange(LINEAR_CELLS + 1)
        dbl = lin[-1] * 2.0 ** np.arange(DOUBLING_CELLS + 1)
        edges = np.concatenate([lin, dbl[1:]])
        n = edges.size - 1
        lo.append(edges[:-1]); hi.append(edges[1:])
        coord.append(np.full(n, code)); seg.append(np.full(n, k))
        grp.append(np.concatenate([np.full(LINEAR_CELLS, -1), np.arange(DOUBLING_CELLS)]))
        graded_segs.append(k)
    cat = np.concatenate
    return cat(lo), cat(hi), cat(coord).astype(int), cat(seg).astype(int), cat(grp).astype(int), graded_segs


def quad(fn, a: float, b: float, tol: float = 1e-10, *, breaks=(), batch: int = 1,
         graded: bool = True, budget: int | None = None, weighted: bool = False) -> QuadResult:
    """Integrate ``fn`` over ``[a, b]`` to ``err <= tol * max(1, |value|)``.

    With ``weighted=True`` the integrand must already include the coordinate
    Jacobian (``pts.jac``); use this with ``x * f(x) * pts.jac_over_x()`` when
    ``f`` behaves like ``1/x`` and ``x`` may underflow.

    ``status`` per batch member is ``ok``, ``growing`` (the integral blows up
    at a graded endpoint), ``undecided`` or ``budget``.
    """
    if not (0.0 <= a <= b <= 1.0):
        raise ValueError(f"need 0 <= a <= b <= 1, got [{a}, {b}]")
    if b == a:
        return QuadResult(np.zeros(batch), np.zeros(batch), ["ok"] * batch)
    budget = work_budget() if budget is None else budget
    segs = _segments(a, b, breaks)
    lo, hi, coord, seg, grp, graded_segs = _initial_cells(segs, graded)
    I, E, A = _eval_cells(fn, lo, hi, coord, batch, weighted)
    used = lo.size

    while True:
        value, err, status = _assemble(I, E, seg, grp, graded_segs, batch)
        target = tol * np.maximum(1.0, np.abs(value))
        live = np.array([s == "ok" for s in status])
        todo = live & (err > target)
        if not todo.any():
            break
        if used >= budget:
            status = [("budget" if t else s) for s, t in zip(status, todo)]
            break
        Ef = np.where(np.isfinite(E), E, 0.0)
        score = (Ef[todo] / target[todo, None]).max(axis=0)
        sel = score > 1.0 / (2 * max(1, lo.size))
        if not sel.any():
            status = [("undecided" if t else s) for s, t in zip(status, todo)]
            break
        mid = (lo[sel] + hi[sel]) / 2
        nlo = np.concatenate([lo[sel], mid])
        nhi = np.concatenate([mid, hi[sel]])
        nc, ns, ng = (np.tile(arr[sel], 2) for arr in (coord, seg, grp))
        nI, nE, nA = _eval_cells(fn, nlo, nhi, nc, batch, weighted)
        used += nlo.size
        keep = ~sel
        lo, hi = np.concatenate([lo[keep], nlo]), np.concatenate([hi[keep], nhi])
        coord, seg, grp = (np.concatenate([o[keep], n]) for o, n in ((coord, nc), (seg, ns), (grp, ng)))
        I = np.concatenate([I[:, keep], nI], axis=1)
        E = np.concatenate([E[:, keep], nE], axis=1)
    return QuadResult(value, err, status)


def _assemble(I, E, seg, grp, graded_segs, batch):
    value = np.zeros(batch)
    err = np.zeros(batch)
    status = ["ok"] * batch
    finite = np.isfinite(I)
    for k in np.unique(seg):
        in_seg = seg == k
        lin = in_seg & (grp < 0)
        for bi in range(batch):
            if not finite[bi, lin].all():
                status[bi] = "growing"
        value += np.where(finite[:, lin], I[:, lin], 0.0).sum(axis=1)
        err += np.where(finite[:, lin], E[:, lin], 0.0).sum(axis=1)
        if k not in graded_segs:
            continue
        dbl = in_seg & (grp >= 0)
        gids = grp[dbl]
        for bi in range(batch):
            gs = np.zeros(DOUBLING_CELLS)
            ge = np.zeros(DOUBLING_CELLS)
            np.add.at(gs, gids, I[bi, dbl])
            np.add.at(ge, gids, E[bi, dbl])
            bad = np.flatnonzero(~np.isfinite(gs))
            n = bad[0] if bad.size else DOUBLING_CELLS
            t, te, st = _tail(gs[:n], abs(value[bi]) + abs(gs[:n]).sum())
            if st != "ok":
                if status[bi] == "ok":
                    status[bi] = st
                continue
            value[bi] += gs[:n].sum() + t
            err[bi] += ge[:n].sum() + te
    with np.errstate(invalid="ignore"):
        err += _ROUNDOFF * np.abs(value)
    for bi in range(batch):
        if status[bi] == "growing":
            value[bi] = math.inf
            err[bi] = math.inf
    return value, err, status


def divergence_probe(truncated: list[float], tol: float) -> str:
    """Classify truncated integrals over ``[4^-k, b]``, k = 1..16.

    ``divergent`` if the sequence is strictly increasing and either grows by
    more than 1e3 overall or exceeds 1e8; ``finite`` once successive
    differences fall below ``tol``; ``unknown`` otherwise.
    """
    v = np.asarray(truncated, dtype=float)
    if not np.all(np.isfinite(v)):
        return "divergent" if np.all(np.diff(v[np.isfinite(v)]) > 0) else "unknown"
    d = np.diff(v)
    if np.all(d > 0) and (v[-1] > 1e8 or (v[0] > 0 and v[-1] / v[0] > 1e3)):
        return "divergent"
    if abs(d[-1]) < tol * max(1.0, abs(v[-1])) and abs(d[-2]) < tol * max(1.0, abs(v[-1])):
        return "finite"
    return "unknown"


PROBE_CUTOFFS = 4.0 ** -np.arange(1, 17)


def probe_truncations(fn, b: float, tol: float, breaks=()) -> list[float]:
    out = []
    for eps in PROBE_CUTOFFS:
        if eps >= b:
            out.append(0.0)
            continue
        geo = eps * 2.0 ** np.arange(1, 64)
        r = quad(fn, float(eps), b, tol, breaks=tuple(breaks) + tuple(geo[geo < b]), graded=False)
        out.append(float(r.value[0]))
    return out
