"""File outputs for cost experiments: delimited rows plus rendered figures.

The CSV is the machine-readable record (one row per trial, a trailing
``mean`` row); the figures are the human-readable one.  Both land next to
each other so a results directory is self-explaining.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path

from .adversary import COST_COLUMNS, CostReport


def write_cost_csv(report: CostReport, csv_path: str | Path) -> Path:
    csv_path = Path(csv_path)
    csv_path.write_text("\n".join(report.csv_lines()) + "\n")
    return csv_path


def render_cost_figures(report: CostReport, stem: str | Path) -> list[Path]:
    """Render summary figures next to the CSV; returns the written paths.

    One bar chart of mean operation counts, one distribution of per-trial
    public-key decryption counts (the quantity the schemes differ on).
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    stem = Path(stem)
    title = (
        f"{report.scheme.label} scheme, n={report.n}, {report.role.value}, "
        f"{report.mode.value} mode, {report.trials} trials"
    )
    written = []

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    names = [name for name, _ in COST_COLUMNS]
    ax.bar(names, [float(report.mean(attr)) for _, attr in COST_COLUMNS],
           color="#4c72b0", width=0.6)
    ax.set_ylabel("mean ops per decryption attempt")
    ax.set_title(title, fontsize=10)
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    means_path = stem.with_name(stem.name + "_means.png")
    fig.savefig(means_path, dpi=150)
    plt.close(fig)
    written.append(means_path)

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    dist = Counter(report.column("pke_dec_count"))
    xs = sorted(dist)
    ax.bar(xs, [dist[x] for x in xs], color="#dd8452", width=0.8)
    ax.set_xlabel("public-key decryptions in one attempt")
    ax.set_ylabel("trials")
    ax.set_title(title, fontsize=10)
    ax.set_xticks(xs)
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    dist_path = stem.with_name(stem.name + "_pke_dec.png")
    fig.savefig(dist_path, dpi=150)
    plt.close(fig)
    written.append(dist_path)

    return written
