"""Render figure datasets to image files next to their CSV output."""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_AXIS_LABELS = {
    "d": "distinguishability bound d",
    "chi": "chi (rad)",
    "delta": "delta (rad)",
    "m": "m",
    "n": "n",
    "p": "p",
    "lambda": "lambda",
    "mu": "mu",
    "x": "x (rad)",
    "y": "y (rad)",
}


def render_figure(dataset, path) -> None:
    """Plot a dataset: line for one axis, heat map for two, scatter for three."""
    names = list(dataset.axes)
    fig = plt.figure(figsize=(6.0, 4.5))
    if len(names) == 1:
        ax = fig.add_subplot(111)
        xs = np.array([row[names[0]] for row in dataset.rows])
        ax.plot(xs, [row["p_npovm"] for row in dataset.rows], label="constrained optimum")
        ax.plot(xs, [row["p_povm"] for row in dataset.rows], "--", label="unassisted optimum")
        ax.set_xlabel(_AXIS_LABELS.get(names[0], names[0]))
        ax.set_ylabel("error probability")
        ax.legend()
    elif len(names) == 2:
        ax = fig.add_subplot(111)
        a0 = dataset.axes[names[0]]
        a1 = dataset.axes[names[1]]
        grid = np.full((a0.size, a1.size), np.nan)
        for idx, row in enumerate(dataset.rows):
            grid[idx // a1.size, idx % a1.size] = row["delta_p"]
        mesh = ax.pcolormesh(a0, a1, grid.T, shading="auto", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="delta error probability")
        ax.set_xlabel(_AXIS_LABELS.get(names[0], names[0]))
        ax.set_ylabel(_AXIS_LABELS.get(names[1], names[1]))
    else:
        ax = fig.add_subplot(111, projection="3d")
        pts = np.array([[row[n] for n in names] + [row["delta_p"]] for row in dataset.rows])
        sc = ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], c=pts[:, 3], s=6, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="delta error probability", shrink=0.7)
        ax.set_xlabel(names[0])
        ax.set_ylabel(names[1])
        ax.set_zlabel(names[2])
    ax.set_title(dataset.figure_id)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
