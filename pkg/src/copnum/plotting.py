"""Figures for bound sweeps and guard-count tables (written to files, never shown)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bounds import SweepReport  # noqa: E402


def plot_sweep_profile(reports: list[SweepReport], path: str | Path) -> Path:
    """max g* over (s, t) against the headline bound, one curve pair per report."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for rep in reports:
        if not rep.profile:
            continue
        n, gmax, bound = np.array(rep.profile).T
        label = rep.variant if rep.variant == "undirected" else f"{rep.variant} ({rep.directed_small})"
        (line,) = ax.plot(n, gmax, lw=1.2, label=f"max g*, {label}")
        ax.plot(n, bound, lw=1, ls="--", color=line.get_color(),
                label=f"{rep.constants.d:.4f} sqrt(n) + {rep.constants.additive:g}")
    ax.set_xlabel("n = |G|")
    ax.set_ylabel("cops")
    ax.set_title("g* against the headline bound")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_guard_table(table: np.ndarray, title: str, path: str | Path) -> Path:
    """Heat map of guard counts over cop-robber differences (a, b)."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 4.5))
    im = ax.imshow(table.T, origin="lower", cmap="viridis", interpolation="nearest")
    ax.set_xlabel("a")
    ax.set_ylabel("b")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label="guarded robber moves")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path
