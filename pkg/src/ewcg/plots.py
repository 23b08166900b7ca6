"""Matplotlib renderings of reports, written next to the delimited output.

Every function takes a destination path and saves a PNG; callers decide
whether a figure is wanted (the CLI renders one per report when --out is
given).
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .graphs import Ewcg


def _finish(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_weights(g: Ewcg, path: str | Path) -> Path:
    """Raw and normalized edge weights as grouped bars."""
    fig, ax = plt.subplots(figsize=(7, 4))
    edges = sorted(g.edges.items(), key=lambda kv: -kv[1])
    labels = [f"{u}–{v}" for (u, v), _ in edges]
    raw = [w for _, w in edges]
    norm = [g.normalized_weight(u, v) for (u, v), _ in edges]
    xs = range(len(edges))
    ax.bar([x - 0.2 for x in xs], raw, width=0.4, label="raw")
    ax.bar([x + 0.2 for x in xs], norm, width=0.4, label="normalized")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("edge weight")
    ax.set_title(f"edge weights (side {g.side}, power {g.power})")
    ax.legend()
    return _finish(fig, path)


def plot_color_pmf(colors, probs, rate: float, path: str | Path) -> Path:
    """Induced color distribution with the entropy rate in the title."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([str(c) for c in colors], probs)
    ax.set_xlabel("color")
    ax.set_ylabel("probability")
    ax.set_title(f"color PMF, rate {rate:.4f} bits/symbol")
    return _finish(fig, path)


def plot_rates(report_dict: dict, path: str | Path) -> Path:
    """Bar comparison of the rate-region estimates."""
    keys = ["rate_1", "rate_2", "conditional_rate_1", "conditional_rate_2",
            "joint_rate", "traditional_rate_1", "traditional_rate_2"]
    vals = [report_dict[k] for k in keys if k in report_dict]
    names = [k for k in keys if k in report_dict]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(names, vals)
    ax.set_ylabel("bits/symbol")
    ax.set_title(f"rate region estimates (n={report_dict.get('n')}, b={report_dict.get('b')})")
    ax.tick_params(axis="x", rotation=45, labelsize=7)
    return _finish(fig, path)


def plot_simulation(result_dict: dict, path: str | Path) -> Path:
    """Empirical rates and error counts of one simulation run."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 4))
    ax1.bar(["side 1", "side 2"],
            [result_dict["empirical_rate_1"], result_dict["empirical_rate_2"]])
    ax1.set_ylabel("bits/symbol")
    ax1.set_title("empirical color-stream rates")
    err = result_dict["decode_errors"]
    total = max(result_dict["samples"], 1)
    ax2.bar(["error fraction"], [err / total])
    ber = result_dict.get("binning_error_rate")
    if ber is not None:
        ax2.bar(["binned group errors"], [ber])
    ax2.set_ylim(0, 1)
    ax2.set_title(f"errors ({err}/{total} blocks)")
    return _finish(fig, path)


def plot_reproduction(rows: list[dict], path: str | Path) -> Path:
    """Expected-versus-measured bars for the bundled example checks."""
    numeric = [r for r in rows if isinstance(r.get("expected"), (int, float))
               and isinstance(r.get("got"), (int, float))
               and math.isfinite(r["got"])]
    fig, ax = plt.subplots(figsize=(9, 4.5))
    xs = range(len(numeric))
    ax.bar([x - 0.2 for x in xs], [r["expected"] for r in numeric],
           width=0.4, label="expected")
    ax.bar([x + 0.2 for x in xs], [r["got"] for r in numeric],
           width=0.4, label="measured")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([r["check"] for r in numeric], rotation=60,
                       ha="right", fontsize=6)
    ax.legend()
    ax.set_title("bundled example reproduction")
    return _finish(fig, path)
