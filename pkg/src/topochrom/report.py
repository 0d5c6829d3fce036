"""Delimited summaries and matplotlib figures for verification reports.

The CLI's report paths write a CSV next to any figures so results stay
machine-readable; figures are rendered off-screen to files, never shown.
"""

from __future__ import annotations

import csv
import os
from typing import Any, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .core import Coloring, Graph

__all__ = [
    "write_summary_csv",
    "profile_figure",
    "palette_figure",
    "expectations_figure",
    "circle_map_figure",
]


def write_summary_csv(rows: Sequence[dict[str, Any]], path: str) -> None:
    """One row per expectation or statistic; keys of the first row fix the
    column order."""
    if not rows:
        return
    fieldnames = list(rows[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def profile_figure(g: Graph, c: Coloring, path: str, title: str = "") -> None:
    """Histogram of per-vertex distinct neighbor-color counts."""
    counts = [len({c.colors[u] for u in g.neighbors(v)}) for v in range(g.n)]
    top = max(counts, default=0)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.hist(counts, bins=[x - 0.5 for x in range(top + 2)], edgecolor="black")
    ax.set_xlabel("distinct colors in neighborhood")
    ax.set_ylabel("vertices")
    ax.set_title(title or f"local profile (max+1 = {top + 1})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def palette_figure(c: Coloring, path: str, title: str = "") -> None:
    """Bar chart of color class sizes."""
    sizes: dict[int, int] = {}
    for col in c.colors:
        sizes[col] = sizes.get(col, 0) + 1
    keys = sorted(sizes)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar([str(k) for k in keys], [sizes[k] for k in keys], edgecolor="black")
    ax.set_xlabel("color")
    ax.set_ylabel("class size")
    ax.set_title(title or f"{len(keys)} color classes")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def expectations_figure(rows: Sequence[dict[str, Any]], path: str, title: str = "") -> None:
    """Pass/fail strip for recipe expectations."""
    if not rows:
        return
    labels = [str(r.get("quantity", i)) for i, r in enumerate(rows)]
    passed = [1 if r.get("status") == "pass" else 0 for r in rows]
    colors = ["#2a9d2a" if p else "#cc3333" for p in passed]
    fig, ax = plt.subplots(figsize=(6, 0.5 + 0.35 * len(rows)))
    ax.barh(range(len(rows)), [1] * len(rows), color=colors, edgecolor="black")
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels(labels, fontsize=8)
    ax.set_xticks([])
    ax.set_xlim(0, 1.4)
    for i, r in enumerate(rows):
        ax.text(1.02, i, r.get("status", "?"), va="center", fontsize=8)
    ax.set_title(title or "expectations")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def circle_map_figure(values, colors, p: int, path: str, title: str = "") -> None:
    """Circle-map image positions, one strip per arc color."""
    fig, ax = plt.subplots(figsize=(6, 2.6))
    ax.scatter(values, colors, s=4, alpha=0.6)
    for i in range(p + 1):
        ax.axvline(i / p, color="gray", lw=0.4)
    ax.set_xlabel("circle position")
    ax.set_ylabel("arc color")
    ax.set_title(title or "circle map")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
