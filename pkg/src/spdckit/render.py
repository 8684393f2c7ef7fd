"""Optional SVG rendering.  CSV files are the contract; these plots are
a convenience, kept deterministic (fixed hash salt, no timestamps) so
repeated runs produce identical bytes."""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "spdckit"
    import matplotlib.pyplot as plt
    return plt


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    import matplotlib.pyplot as plt
    plt.close(fig)


def render_grid_svg(grid, path, title: str = "") -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    extent = (grid.col_axis[0], grid.col_axis[-1], grid.row_axis[0], grid.row_axis[-1])
    im = ax.imshow(grid.values, origin="lower", aspect="auto", extent=extent,
                   cmap="viridis")
    ax.set_xlabel(grid.col_label)
    ax.set_ylabel(grid.row_label)
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    _save(fig, path)


def render_curve_svg(x, y, path, xlabel: str = "", ylabel: str = "",
                     title: str = "") -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(np.asarray(x), np.asarray(y), lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, path)
