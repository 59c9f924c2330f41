"""
SVG Figures

Figures are drawn on stand-alone `matplotlib.figure.Figure` objects (no pyplot state, safe
in worker threads) and written as SVG with a fixed hash salt and no date metadata, so the
same inputs always give the same bytes.
"""

import io
import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import matplotlib
import numpy as np
import pandas as pd
from matplotlib.figure import Figure

from datagen.mixture import Dataset

from .metrics import MetricsSummary

logger = logging.getLogger(__name__)

matplotlib.rcParams["svg.hashsalt"] = "raap"
matplotlib.rcParams["svg.fonttype"] = "none"

SVG_METADATA = {"Date": None}


def figure_to_svg(fig: Figure) -> str:
    buffer = io.StringIO()
    fig.savefig(buffer, format="svg", metadata=SVG_METADATA)
    return buffer.getvalue()


def save_svg(fig: Figure, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(figure_to_svg(fig), encoding="utf-8", newline="\n")
    logger.info("Wrote figure %s", path)
    return path


def group_accuracy_figure(ms: MetricsSummary) -> Figure:
    """Grouped bars: one cluster per agent, one bar per group; the worst group is outlined."""
    fig = Figure(figsize=(8, 4))
    ax = fig.add_subplot()
    agent_ids = ms.agent_ids()
    width = 0.8 / ms.n_groups
    positions = np.arange(len(agent_ids))
    for g in range(ms.n_groups):
        heights = [ms.agents[a].per_group_acc[g] or 0.0 for a in agent_ids]
        ax.bar(positions + (g - (ms.n_groups - 1) / 2) * width, heights, width, label=f"group {g}")
    ax.scatter(positions, [ms.agents[a].wg_acc for a in agent_ids], marker="_", s=400, color="black", label="worst group")
    ax.set_xticks(positions, agent_ids)
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("accuracy")
    ax.legend(loc="lower right", fontsize="small")
    fig.tight_layout()
    return fig


def sweep_summary_figure(table: pd.DataFrame) -> Figure:
    """Mean and standard deviation of worst-group and average accuracy per model across seeds."""
    stats = table.groupby("model", sort=False)[["wg_acc", "avg_acc"]].agg(["mean", "std"]).fillna(0.0)
    fig = Figure(figsize=(7, 4))
    ax = fig.add_subplot()
    positions = np.arange(len(stats))
    for offset, column in ((-0.2, "wg_acc"), (0.2, "avg_acc")):
        ax.bar(
            positions + offset,
            stats[(column, "mean")],
            0.4,
            yerr=stats[(column, "std")],
            capsize=3,
            label=column,
        )
    ax.set_xticks(positions, list(stats.index))
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("accuracy")
    ax.legend(loc="lower right")
    fig.tight_layout()
    return fig


def boundary_figure(
    data: Dataset, segments: Sequence[np.ndarray], title: Optional[str] = None, limits: Optional[tuple] = None
) -> Figure:
    """Scatter of the samples by class with the 0.5-level decision boundary polylines."""
    fig = Figure(figsize=(5, 5))
    ax = fig.add_subplot()
    X, y = data.X, data.y
    for label, marker in ((0, "o"), (1, "^")):
        ax.scatter(X[y == label, 0], X[y == label, 1], s=6, marker=marker, alpha=0.5, label=f"class {label}")
    for k, segment in enumerate(segments):
        ax.plot(segment[:, 0], segment[:, 1], color="black", linewidth=1.5, label="boundary" if k == 0 else None)
    if limits is not None:
        ax.set_xlim(limits[0], limits[1])
        ax.set_ylim(limits[2], limits[3])
    if title:
        ax.set_title(title)
    ax.set_xlabel("x0")
    ax.set_ylabel("x1")
    ax.legend(loc="upper left", fontsize="small")
    fig.tight_layout()
    return fig
