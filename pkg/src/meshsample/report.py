"""Figure rendering for the analyze report: NN histogram and projections."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .particles import ParticleSet


def nn_histogram_figure(nn_distances, spacing, path) -> str:
    """Histogram of nearest-neighbor distances with the declared spacing marked."""
    nn = np.asarray(nn_distances, dtype=np.float64)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(nn, bins=min(60, max(10, len(nn) // 20)), color="#4878cf", edgecolor="white")
    if spacing is not None:
        ax.axvline(spacing, color="#d65f5f", linestyle="--", label=f"spacing = {spacing:g}")
        ax.legend(frameon=False)
    ax.set_xlabel("nearest-neighbor distance")
    ax.set_ylabel("particles")
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return str(path)


def projection_figure(ps: ParticleSet, path) -> str:
    """Three orthographic scatter views of the particle positions."""
    pos = ps.positions
    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    pairs = [(0, 1, "x", "y"), (0, 2, "x", "z"), (1, 2, "y", "z")]
    for ax, (i, j, ni, nj) in zip(axes, pairs):
        ax.scatter(pos[:, i], pos[:, j], s=1.0, linewidths=0, color="#4878cf")
        ax.set_xlabel(ni)
        ax.set_ylabel(nj)
        ax.set_aspect("equal")
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)
    fig.suptitle(f"{len(ps)} particles ({ps.kind})")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return str(path)


def write_report_csv(stats: dict, path) -> str:
    """One-row CSV of the analyze statistics, alongside the figures."""
    keys = list(stats.keys())
    lines = [",".join(keys), ",".join("" if stats[k] is None else repr(stats[k]) for k in keys)]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return str(path)
