"""Figures written next to the CSV/JSON outputs when ``--plot`` is given."""

from __future__ import annotations

import math
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .exact_dp import JointWeightDistribution  # noqa: E402


def plot_joint(dist: JointWeightDistribution, path, title: str | None = None) -> None:
    """Heat map of log10 mass over (initial weight, final weight) with the light/heavy cut."""
    n = dist.width
    total = dist.total
    grid = np.full((n + 1, n + 1), np.nan)
    for (x, y), c in dist.items():
        grid[y, x] = math.log10(c / total)
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    im = ax.imshow(grid, origin="lower", cmap="viridis", aspect="equal")
    ax.axvline(n / 2 + 0.5, color="w", lw=0.8, ls="--")
    ax.axhline(n / 2 + 0.5, color="w", lw=0.8, ls="--")
    ax.set_xlabel("weight of s")
    ax.set_ylabel("weight of s + alpha")
    if title:
        ax.set_title(title, fontsize=9)
    fig.colorbar(im, ax=ax, label="log10 probability")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_scan(rows, path) -> None:
    series = defaultdict(list)
    for r in rows:
        series[f"{r['family']}:{r['param']}"].append(r)
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, pts in sorted(series.items()):
        pts.sort(key=lambda r: r["n"])
        ns = [r["n"] for r in pts]
        fr = [float(r["lth_fraction"]) for r in pts]
        err = [float(r["stderr"] or 0.0) for r in pts]
        ax.errorbar(ns, fr, yerr=err, marker="o", ms=3, lw=1, label=label)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel("light -> heavy fraction")
    if series:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
