"""Static SVG figures for sweep reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

# fixed salt so that element ids in the SVG are reproducible
plt.rcParams["svg.hashsalt"] = "hclab"

REFERENCE_GID = "reference-line"


def sweep_figure(report, ax=None):
    """Ratio against ``eps`` (log axis), the proof-side lower bound, and one
    horizontal rule per theoretical constant."""
    if ax is None:
        fig, ax = plt.subplots(figsize=(6, 4))
    else:
        fig = ax.figure
    pts = report.sweep_points
    if pts:
        eps = [e for e, _, _ in pts]
        ax.plot(eps, [r for _, r, _ in pts], "o-", label="ratio")
        lows = [lb for _, _, lb in pts]
        if any(lows):
            ax.plot(eps, lows, "s--", label="lower bound")
        ax.set_xscale("log", base=2)
    for i, (label, value) in enumerate(report.reference_lines):
        line = ax.axhline(value, color=f"C{3 + i}", linestyle=":", label=f"{label} = {value:.6g}")
        line.set_gid(f"{REFERENCE_GID}-{i}")
    ax.set_xlabel("eps")
    ax.set_ylabel("ratio")
    ax.set_title(f"{report.name} ({report.verdict})")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="best")
    fig.tight_layout()
    return fig


def save_svg(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
