"""Render curve CSV files to SVG."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .harness import read_curve_csv


def plot_curves(
    csv_paths: Sequence[str | Path],
    out_path: str | Path,
    labels: Sequence[str] | None = None,
    log_y: bool = True,
    x_label: str = "Es/N0 (dB)",
    y_label: str = "BER",
    title: str | None = None,
) -> Path:
    """One line per CSV, with its confidence band when the file carries
    ci columns."""
    if labels is not None and len(labels) != len(csv_paths):
        raise ValueError("one label per CSV file")
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for i, path in enumerate(csv_paths):
        rows = read_curve_csv(path)
        x = [r[0] for r in rows]
        y = [r[1] for r in rows]
        label = labels[i] if labels else Path(path).stem
        (line,) = ax.plot(x, y, marker="o", markersize=4, label=label)
        if rows and len(rows[0]) >= 4:
            lo = [r[2] for r in rows]
            hi = [r[3] for r in rows]
            ax.fill_between(x, lo, hi, alpha=0.2, color=line.get_color())
    if log_y:
        ax.set_yscale("log")
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    out = Path(out_path)
    fig.savefig(out, format="svg", bbox_inches="tight")
    plt.close(fig)
    return out
