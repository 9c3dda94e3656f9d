"""Figure rendering for run reports: support distribution and counters.

Rendered to files next to the delimited output; uses the Agg backend so no
display is needed.
"""

from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

# strip the varying PNG text chunk so re-runs produce stable files
_PNG_METADATA = {"Software": "fsmine"}


def _save(fig, path):
    fig.savefig(path, dpi=120, metadata=_PNG_METADATA)
    plt.close(fig)
    return path


def supports_figure(report, path, top=25):
    """Horizontal bars of the most supported patterns."""
    rows = report.patterns[:top]
    fig, ax = plt.subplots(figsize=(7, max(2.0, 0.32 * len(rows) + 1.2)))
    if rows:
        names = [r[0][:18] + ("…" if len(r[0]) > 18 else "") for r in rows]
        supports = [r[2] for r in rows]
        ypos = range(len(rows) - 1, -1, -1)
        ax.barh(list(ypos), supports, color="#4878cf")
        ax.set_yticks(list(ypos))
        ax.set_yticklabels(names, fontsize=7, family="monospace")
        ax.axvline(report.threshold, color="#d65f5f", linestyle="--",
                   linewidth=1, label=f"threshold = {report.threshold}")
        ax.legend(fontsize=8)
    else:
        ax.text(0.5, 0.5, "no frequent patterns", ha="center", va="center",
                transform=ax.transAxes)
    ax.set_xlabel("MNI support")
    ax.set_title(f"frequent size-{report.config['size']} patterns "
                 f"({len(report.patterns)} total)")
    fig.tight_layout()
    return _save(fig, path)


def counters_figure(report, path):
    """Work counters of the run, log scale."""
    items = [(k, v) for k, v in report.counters.items()
             if isinstance(v, (int, float)) and k != "sampled_fraction" and v > 0]
    fig, ax = plt.subplots(figsize=(7, 3.2))
    if items:
        names = [k for k, _ in items]
        values = [v for _, v in items]
        ax.bar(range(len(items)), values, color="#6acc65")
        ax.set_yscale("log")
        ax.set_xticks(range(len(items)))
        ax.set_xticklabels(names, rotation=20, ha="right", fontsize=8)
        for i, v in enumerate(values):
            ax.text(i, v, f"{v:,}", ha="center", va="bottom", fontsize=7)
    else:
        ax.text(0.5, 0.5, "no counter data", ha="center", va="center",
                transform=ax.transAxes)
    ax.set_title("join and aggregation counters")
    fig.tight_layout()
    return _save(fig, path)


def render_report_figures(report, outdir):
    os.makedirs(outdir, exist_ok=True)
    return [
        supports_figure(report, os.path.join(outdir, "supports.png")),
        counters_figure(report, os.path.join(outdir, "counters.png")),
    ]
