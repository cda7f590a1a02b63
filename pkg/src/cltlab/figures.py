"""Figure rendering for the report path.

Every subcommand that writes delimited output can also render a matplotlib
figure next to it: catalogue indicators on the sampled window, the
conformal square with its future edges and chain endpoints, convergence gap
trajectories, and distance-profile heat maps.  The Agg backend keeps this
headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .spacetimes import HALF_PI

__all__ = [
    "catalogue_figure",
    "square_figure",
    "gap_figure",
    "profile_figure",
]


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
    return path


def catalogue_figure(catalogue, path, max_shaded: int = 4) -> Path:
    """Sampled window with a few catalogue indicators shaded."""
    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    entries = catalogue.entries
    shade = entries[:: max(1, len(entries) // max_shaded)][:max_shaded]
    cloud = entries[0].indicator.cloud
    pts = cloud.points
    ax.plot(pts[:, 1], pts[:, 0], ",", color="0.85", zorder=0)
    colors = plt.cm.viridis(np.linspace(0.15, 0.85, len(shade)))
    for color, entry in zip(colors, shade):
        sel = entry.indicator.mask
        ax.plot(pts[sel, 1], pts[sel, 0], ".", ms=1.6, color=color, label=entry.label, zorder=1)
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_title(f"{catalogue.model.name} boundary catalogue (h={catalogue.h:g})")
    ax.legend(loc="lower right", fontsize=7, markerscale=6)
    ax.set_aspect("equal")
    return _save(fig, path)


def square_figure(edges: dict, endpoints, path) -> Path:
    """The conformal square: future edges, sampled edge points, endpoints."""
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    s = HALF_PI
    ax.plot([-s, s, s, -s, -s], [-s, -s, s, s, -s], "-", color="0.4", lw=1)
    ax.plot([-s, s], [s, s], "-", color="tab:orange", lw=2.5, alpha=0.6, label="future edges")
    ax.plot([s, s], [-s, s], "-", color="tab:orange", lw=2.5, alpha=0.6)
    for name, pts in edges.items():
        if pts:
            arr = np.asarray(pts)
            ax.plot(arr[:, 0], arr[:, 1], "o", ms=3, label=name)
    if endpoints:
        arr = np.asarray([p for p in endpoints if p is not None])
        if len(arr):
            ax.plot(arr[:, 0], arr[:, 1], "x", ms=5, color="tab:red", label="chain endpoints")
    ax.plot([s], [s], "*", ms=12, color="tab:purple", label="future corner")
    ax.set_xlabel("u'")
    ax.set_ylabel("v'")
    ax.set_title("conformal square and its future boundary")
    ax.legend(loc="lower left", fontsize=7)
    ax.set_aspect("equal")
    return _save(fig, path)


def gap_figure(trajectories: dict[str, np.ndarray], path, tol: float | None = None) -> Path:
    """Sup-norm gap per sequence index, one line per labelled sequence."""
    fig, ax = plt.subplots(figsize=(5.6, 3.6))
    for label, gaps in trajectories.items():
        ax.plot(range(1, len(gaps) + 1), gaps, marker=".", lw=1, label=label)
    if tol is not None:
        ax.axhline(tol, color="0.3", ls="--", lw=1, label=f"tolerance {tol:g}")
    ax.set_xlabel("n")
    ax.set_ylabel("sup profile gap")
    ax.set_yscale("symlog", linthresh=1e-4)
    ax.legend(fontsize=7)
    ax.set_title("profile convergence trajectories")
    return _save(fig, path)


def profile_figure(profile, path, title: str = "distance profile") -> Path:
    """Scatter of the cloud colored by distance value."""
    pts = profile.cloud.points
    fig, ax = plt.subplots(figsize=(5.2, 4.6))
    if pts.shape[1] == 1:
        ax.plot(pts[:, 0], profile.values, ".", ms=2)
        ax.set_xlabel("x")
        ax.set_ylabel("distance")
    else:
        scat = ax.scatter(pts[:, 1], pts[:, 0], c=profile.values, s=2, cmap="magma")
        fig.colorbar(scat, ax=ax, label="distance")
        ax.set_xlabel("x")
        ax.set_ylabel("t")
        ax.set_aspect("equal")
    ax.set_title(title)
    return _save(fig, path)
