"""Optional figures for ``cesaro-ri report --figures DIR``."""

from __future__ import annotations

import os

import numpy as np

from .cesaro import cesaro
from .certificates import witness
from .fncore.ops import rearrange
from .fncore.points import Points
from .rispaces.phi import LogPhi, PowerPhi
from .rispaces.spaces import Lorentz, Lp, Marcinkiewicz
from .vmeasure import density_norms


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def density_norm_figure(path: str) -> str:
    plt = _plt()
    ys = np.geomspace(1e-8, 0.99, 200)
    fig, ax = plt.subplots(figsize=(6, 4))
    for X in (Lp(1), Lp(2), Lorentz(PowerPhi(0.5)), Marcinkiewicz(PowerPhi(0.5)),
              Lorentz(LogPhi(2.0))):
        ax.loglog(ys, density_norms(X, ys), label=X.name)
    ax.set_xlabel("y")
    ax.set_ylabel("||F_y||_X")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def witness_figure(path: str) -> str:
    plt = _plt()
    xs = np.linspace(0.01, 0.99, 300)
    fig, ax = plt.subplots(figsize=(6, 4))
    for a in (0.5, 0.75, 1.0):
        f = witness(PowerPhi(a))
        cf = cesaro(f).eval(Points.at(xs))
        ax.semilogy(xs, cf, label=f"C f, a={a:g}")
        ax.semilogy(xs, rearrange(cesaro(f)).eval(Points.at(xs)), "--", lw=0.8,
                    label=f"(C f)*, a={a:g}")
    ax.set_xlabel("x")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_all(outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    return [density_norm_figure(os.path.join(outdir, "density_norms.png")),
            witness_figure(os.path.join(outdir, "witness.png"))]
