"""Render masks and evaluation reports to figure files.

Matplotlib is imported lazily with the Agg backend so the library and CLI
stay importable (and fast) on headless machines.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .core import AlphaMask, SpatialMask
from .evaluate import EvalReport


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_alpha_mask(mask: AlphaMask, path: str | Path) -> Path:
    """Line plot of the per-frame blend weight."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 3))
    t = np.arange(mask.length)
    ax.plot(t, mask.values, marker="o", lw=1.5)
    ax.set_xlabel("frame t")
    ax.set_ylabel("clip-1 weight")
    n1, n2, r = mask.params
    ax.set_title(f"temporal blend weights (n1={n1}, n2={n2}, r={r}, scenario {mask.scenario})")
    ax.set_ylim(-0.05, 1.05)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_spatial_mask(mask: SpatialMask, path: str | Path) -> Path:
    """Row profile plus heatmap of the vertical-split mask."""
    plt = _plt()
    fig, (ax0, ax1) = plt.subplots(
        2, 1, figsize=(6, 4), gridspec_kw={"height_ratios": [2, 1]}
    )
    row = mask.values[0]
    ax0.step(np.arange(mask.width), row, where="mid")
    ax0.set_ylabel("clip-1 weight")
    ax0.set_ylim(-0.05, 1.05)
    ax0.set_title(
        f"split at column {mask.split_column}, band ±{mask.transition_half_width}px, "
        f"area {mask.area:.4f}"
    )
    ax0.grid(alpha=0.3)
    ax1.imshow(mask.values, vmin=0, vmax=1, aspect="auto", cmap="gray")
    ax1.set_xlabel("column")
    ax1.set_yticks([])
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_per_class_ap(report: EvalReport, path: str | Path) -> Path:
    """Bar chart of per-class AP with the mAP line."""
    plt = _plt()
    aps = report.per_class_ap
    k = len(aps)
    fig, ax = plt.subplots(figsize=(max(6, 0.25 * k), 3.5))
    xs = np.arange(k)
    vals = np.where(np.isnan(aps), 0.0, aps)
    colors = ["#bbbbbb" if math.isnan(a) else "#1f77b4" for a in aps]
    ax.bar(xs, vals, color=colors)
    ax.axhline(report.map, color="#d62728", lw=1.2, label=f"mAP {report.map:.2f}%")
    ax.set_xlabel("class")
    ax.set_ylabel("AP (%)")
    ax.set_title(f"per-class average precision ({report.protocol})")
    ax.legend(loc="upper right")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_split_maps(report: EvalReport, path: str | Path) -> Path:
    """Bar chart of mAP per frame subset (single/multi action, boundary)."""
    plt = _plt()
    items = [(k, v) for k, v in report.split_maps.items()]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs = np.arange(len(items))
    vals = [0.0 if v is None else v for _, v in items]
    colors = ["#bbbbbb" if v is None else "#2ca02c" for _, v in items]
    ax.bar(xs, vals, color=colors)
    ax.set_xticks(xs, [k.replace("_", "\n") for k, _ in items])
    ax.set_ylabel("mAP (%)")
    ax.set_title("mAP by frame subset")
    for x, (_, v) in zip(xs, items):
        ax.text(x, 0.5, "absent" if v is None else f"{v:.2f}", ha="center", fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
