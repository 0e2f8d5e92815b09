"""Matplotlib rendering for the study commands.

Each study writes a CSV of raw rows; these helpers turn the same rows into
the companion boxplot figure saved next to the CSV.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _grouped(rows, key, value):
    groups: dict = {}
    for row in rows:
        groups.setdefault(row[key], []).append(row[value])
    return groups


def render_bounds_figure(rows, path) -> None:
    """Boxplot of distance/bound ratios, one box per exponent p."""
    groups = _grouped(rows, "p", "ratio")
    keys = sorted(groups)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.boxplot([groups[k] for k in keys], tick_labels=[f"p={k:g}" for k in keys])
    ax.set_ylabel("sliced distance / stability bound")
    ax.set_title("Tightness of the stability bound")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_convergence_figure(rows, path) -> None:
    """Boxplots of approx/exact ratios against sample count, per sampling rule."""
    samplings = sorted({row["sampling"] for row in rows})
    fig, axes = plt.subplots(
        1, len(samplings), figsize=(5 * len(samplings), 4), squeeze=False
    )
    for ax, sampling in zip(axes[0], samplings):
        sub = [row for row in rows if row["sampling"] == sampling]
        groups = _grouped(sub, "k", "ratio")
        ks = sorted(groups)
        ax.boxplot([groups[k] for k in ks], tick_labels=[str(k) for k in ks])
        ax.axhline(1.0, color="gray", lw=0.8, ls="--")
        ax.set_xlabel("samples k")
        ax.set_ylabel("approx / exact")
        ax.set_title(sampling)
        ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
