"""Line charts for sweep summaries.

Figures are written as SVG with fixed metadata and hash salt so reruns
produce identical files.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
    "lines.markersize": 3,
    "svg.hashsalt": "condorcet-sim",
    "svg.fonttype": "none",
}

LABELS = {
    "cycle_prob": "chance of a Condorcet cycle",
    "txs_in_cycles_mean": "transactions in cycles",
    "trapped_mean": "honest transactions trapped",
    "success_all_rate": "attack success rate",
    "success_any_rate": "attack success rate (any trapped)",
    "accuracy_mean": "fraction of pairs ordered correctly",
}

AXIS_LABELS = {
    "r": "external network ratio r",
    "r_internal": "internal network ratio r'",
    "reorder_p": "reordering probability p",
}


def figsize(ncols: int, width: float = 3.4, ratio: float = 0.75):
    return (width * ncols, width * ratio)


def plot_summary(preset, summary, path) -> Path:
    path = Path(path)
    metrics = preset.plots
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, len(metrics), figsize=figsize(len(metrics)), squeeze=False)
        series: dict = {}
        for rec in summary:
            series.setdefault((rec["setting"], rec["scheme"]), []).append(rec)
        for ax, metric in zip(axes[0], metrics):
            for (setting, scheme), recs in series.items():
                pts = sorted((rec["value"], rec[metric]) for rec in recs if not math.isnan(rec[metric]))
                if not pts:
                    continue
                xs, ys = zip(*pts)
                label = setting if scheme == "-" else f"{setting} {scheme}"
                ax.plot(xs, ys, marker="o", label=label)
            if preset.log_x:
                ax.set_xscale("log")
            ax.set_xlabel(AXIS_LABELS.get(preset.axis, preset.axis))
            ax.set_ylabel(LABELS.get(metric, metric))
            ax.legend(loc="best")
        fig.suptitle(preset.name, fontsize=9)
        fig.tight_layout()
        fmt = path.suffix.lstrip(".").lower() or "svg"
        # no timestamp, so reruns give identical files
        extra = {"metadata": {"Date": None}} if fmt in ("svg", "pdf") else {}
        fig.savefig(path, format=fmt, **extra)
        plt.close(fig)
    return path
