"""Figure rendering for verification reports.

Reports are machine-readable first; these helpers draw the same content as
figures (theory versus empirical bars plus a z-score panel) when a CLI run
asks for a plot file next to its CSV output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .compare import LawReport, _outcome_text
from .series import SeriesCheckReport


def figsize(width=8.0, hscale=None):
    golden = (np.sqrt(5.0) - 1.0) / 2.0
    return [width, width * (hscale if hscale is not None else golden)]


def law_report_figure(report: LawReport, title: str = ""):
    labels = [_outcome_text(r.outcome) for r in report.rows] + ["tail"]
    theory = [r.theory for r in report.rows] + [report.tail_theory]
    total = max(report.total_samples, 1)
    empirical = [r.empirical for r in report.rows] + [report.tail_count / total]
    zs = [r.z for r in report.rows]

    fig, (ax_p, ax_z) = plt.subplots(
        2, 1, figsize=figsize(max(8.0, 0.35 * len(labels)), 0.9), sharex=False
    )
    x = np.arange(len(labels))
    width = 0.4
    ax_p.bar(x - width / 2, theory, width, label="theory", color="#4477aa")
    ax_p.bar(x + width / 2, empirical, width, label="empirical", color="#ee6677")
    ax_p.set_ylabel("probability")
    ax_p.set_xticks(x)
    ax_p.set_xticklabels(labels, rotation=90, fontsize=7)
    ax_p.legend(frameon=False)
    if title:
        ax_p.set_title(title)

    xz = np.arange(len(zs))
    ax_z.axhline(report.z_threshold, color="grey", linestyle="--", linewidth=1)
    ax_z.axhline(-report.z_threshold, color="grey", linestyle="--", linewidth=1)
    finite = [z if np.isfinite(z) else np.sign(z) * 10 for z in zs]
    ax_z.stem(xz, finite, basefmt=" ")
    ax_z.set_ylabel("z-score")
    ax_z.set_xlabel("outcome index")
    fig.tight_layout()
    return fig


def series_report_figure(report: SeriesCheckReport, title: str = ""):
    labels = [" ".join(str(x) for x in row.q) for row in report.rows]
    residuals = [abs(float(row.residual)) for row in report.rows]
    fig, ax = plt.subplots(figsize=figsize(max(8.0, 0.3 * len(labels)), 0.6))
    ax.bar(np.arange(len(labels)), residuals, color="#4477aa")
    ax.set_yscale("symlog", linthresh=1e-16)
    ax.set_ylabel("|residual|")
    ax.set_xticks(np.arange(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=7)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig


def save_figure(fig, path) -> None:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
