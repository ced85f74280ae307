"""Figures for sweep reports."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def sweep_figure(ranks, limit: int, order: int, path, label: str = "D") -> Path:
    """Bar chart of how many pairs need each round count, with the proven
    upper bound drawn as a dashed line."""
    counts = Counter(ranks)
    xs = list(range(1, max(list(counts) + [limit]) + 1))
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(xs, [counts.get(x, 0) for x in xs], color="#4a7ab7", width=0.7)
    ax.axvline(limit + 0.5, color="#b74a4a", linestyle="--", label=f"bound {limit}")
    ax.set_xticks(xs)
    ax.set_xlabel(f"{label} (rounds)")
    ax.set_ylabel("pairs")
    ax.set_yscale("log")
    ax.set_title(f"order {order}: {sum(counts.values())} pairs")
    ax.legend(frameon=False)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
