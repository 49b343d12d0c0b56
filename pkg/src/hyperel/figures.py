"""Figure rendering for the report path.

Figures are an auxiliary view of the exact data: they use floating point
freely, are written next to the delimited output, and are never part of the
determinism or acceptance surface. matplotlib loads lazily so library users
who never plot pay nothing for it.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .hyper_core import jacobi_P
from .questions import Q3Report, Q4Report, SearchRecord

LOG2_3 = math.log2(3)


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def figure_paths(output_path: str, command: str) -> Dict[str, str]:
    """Figure files that accompany a written report."""
    base, _ = os.path.splitext(output_path)
    names = {
        "search": ("magnitude",),
        "answer-q4": ("bound_margin",),
        "answer-q3": ("certification",),
        "szego-check": ("weighted_curve",),
    }.get(command, ())
    return {name: f"{base}_{name}.png" for name in names}


def _log2_abs(value: int) -> Optional[float]:
    if value == 0:
        return None
    return math.log2(abs(value))


def search_figure(records: Sequence[SearchRecord], path: str) -> None:
    """log2|ell| - log2|r| against n2; equality pairs sit exactly at zero
    only when the signs also agree, so they get their own marker."""
    plt = _plt()
    xs, ys = [], []
    eq_xs, eq_ys = [], []
    gt_xs, gt_ys = [], []
    for rec in records:
        le = _log2_abs(rec.ell)
        lr = _log2_abs(rec.r)
        if le is None or lr is None:
            continue
        delta = le - lr
        if rec.equal:
            eq_xs.append(rec.pair.n2)
            eq_ys.append(delta)
        elif delta > 0:
            gt_xs.append(rec.pair.n2)
            gt_ys.append(delta)
        else:
            xs.append(rec.pair.n2)
            ys.append(delta)
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.scatter(xs, ys, s=4, alpha=0.35, label="|ell| < |r|")
    if gt_xs:
        ax.scatter(gt_xs, gt_ys, s=24, color="tab:red", label="|ell| > |r|")
    if eq_xs:
        ax.scatter(eq_xs, eq_ys, s=40, color="tab:green", marker="*", label="ell = r")
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xlabel("n2")
    ax.set_ylabel("log2 |ell| - log2 |r|")
    ax.set_title("Magnitude comparison across all searched pairs")
    ax.legend(loc="lower left")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def q4_figure(report: Q4Report, path: str) -> None:
    """Margins of the two-sided chain, from stored bit lengths."""
    plt = _plt()
    xs, upper_margin, lower_margin = [], [], []
    for n1, n2, _holds, _eq, ell_bits in report.rows:
        log_bound = 4 * n2 - 2 * n1 * LOG2_3
        log_r = 4 * n2 - 1
        xs.append(n2)
        # bit_length overestimates log2 by at most 1; the plot is indicative
        upper_margin.append(log_bound - max(ell_bits - 1, 0))
        lower_margin.append(log_r - log_bound)
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.scatter(xs, upper_margin, s=5, alpha=0.4, label="log2 bound - log2 |ell|")
    ax.scatter(xs, lower_margin, s=5, alpha=0.4, label="log2 |r| - log2 bound")
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xlabel("n2")
    ax.set_ylabel("margin (bits)")
    ax.set_title("Two-sided bound chain margins (all positive)")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def q3_figure(report: Q3Report, path: str) -> None:
    """Certified grid margins plus the finite-region tally."""
    plt = _plt()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
    xs = [float(g.x) for g in report.grid]
    ys = [float(g.margin) for g in report.grid]
    ax1.plot(xs, ys, marker=".", linewidth=0.8)
    ax1.set_xscale("log")
    ax1.set_yscale("log")
    ax1.set_xlabel("x")
    ax1.set_ylabel("certified prime-count gap lower bound")
    ax1.set_title("Certified gap on the geometric grid")
    labels = ["witness primes", "resolved by evaluation", "equality pairs"]
    counts = [
        report.witness_count,
        report.evaluation_resolved_count,
        len(report.equality_pairs),
    ]
    bars = ax2.bar(labels, counts, color=["tab:blue", "tab:orange", "tab:green"])
    ax2.set_yscale("symlog")
    ax2.bar_label(bars, labels=[str(c) for c in counts])
    ax2.set_title(f"Finite region: {report.pair_count} pairs below x = {report.x_cap}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def szego_figure(b_exponent: int, degree: int, grid_points: int, path: str) -> None:
    """The weighted square against its right-endpoint value."""
    plt = _plt()
    if grid_points >= 2:
        step = Fraction(2, grid_points - 1)
        grid = [Fraction(-1) + step * j for j in range(grid_points)]
    else:
        grid = [Fraction(1)]
    ys = [float((1 + x) ** b_exponent * jacobi_P(degree, 0, b_exponent, x) ** 2) for x in grid]
    bound = float(2 ** b_exponent * jacobi_P(degree, 0, b_exponent, 1) ** 2)
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot([float(x) for x in grid], ys, linewidth=1.2, label="w(x) P(x)^2")
    ax.axhline(bound, color="tab:red", linewidth=1.0, linestyle="--", label="w(1) P(1)^2")
    ax.set_xlabel("x")
    ax.set_ylabel("weighted square")
    ax.set_title(f"Weighted maximum at the endpoint (b={b_exponent}, degree={degree})")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
