"""Figures for pipeline reports (headless matplotlib)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .runner import Status  # noqa: E402
from .template import TABLE_ORDER  # noqa: E402

_LEVEL = {Status.DISPROVEN: 0, Status.UNKNOWN: 1, Status.PROVEN: 2}
_COLORS = ListedColormap(["#d7301f", "#d9d9d9", "#1a9850"])
STAGES = ("qe", "postprocess", "check", "external")


def plot_template_status(reports, path) -> Path:
    """Problem-by-template grid colored by status, marks in the cells."""
    reports = list(reports)
    grid = [[_LEVEL[r.status(k)] for k in TABLE_ORDER] for r in reports]
    fig, ax = plt.subplots(figsize=(6, 0.45 * max(len(reports), 1) + 1.5))
    if reports:
        ax.imshow(grid, cmap=_COLORS, vmin=0, vmax=2, aspect="auto")
        for i, r in enumerate(reports):
            for j, k in enumerate(TABLE_ORDER):
                ax.text(j, i, r.status(k).mark, ha="center", va="center", fontsize=11)
    ax.set_xticks(range(len(TABLE_ORDER)), [k.label for k in TABLE_ORDER])
    ax.set_yticks(range(len(reports)), [r.problem for r in reports])
    ax.set_title("Template status")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_timings(reports, path) -> Path:
    """Stacked per-stage wall time for each problem, in milliseconds."""
    reports = list(reports)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    bottom = [0.0] * len(reports)
    names = [r.problem for r in reports]
    for stage in STAGES:
        values = [1000 * r.timings.get(stage, 0.0) for r in reports]
        if any(values):
            ax.bar(names, values, bottom=bottom, label=stage)
            bottom = [b + v for b, v in zip(bottom, values)]
    ax.set_ylabel("ms")
    ax.set_title("Pipeline time by stage")
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
