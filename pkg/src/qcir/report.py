"""Figure rendering for CLI reports (distribution bars, acceptance bands).

Imported lazily by the CLI so that plain runs never pay the matplotlib
import cost; uses the Agg backend and only ever writes files.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import AcceptanceCriterion, Interval
from .simulate import bits_to_str


def render_distribution(
    distribution: dict[tuple[int, ...], float], path: str, title: str = ""
) -> None:
    """Bar chart of an outcome distribution, saved to path."""
    items = sorted(distribution.items())
    labels = [bits_to_str(bits) for bits, _ in items]
    values = [p for _, p in items]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(items) + 1.5), 3.2))
    ax.bar(range(len(values)), values, color="#4878cf")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90 if len(labels) > 16 else 0, fontsize=8)
    ax.set_ylabel("probability")
    ax.set_xlabel("outcome")
    ax.set_ylim(0, max(1.0, max(values, default=1.0) * 1.05))
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _draw_band(ax, interval: Interval, color: str, label: str | None) -> None:
    if interval.lo == interval.hi:
        ax.axvline(interval.lo, color=color, linewidth=3, label=label)
    else:
        ax.axvspan(interval.lo, interval.hi, color=color, alpha=0.35, label=label)


def render_acceptance(
    p: float, criterion: AcceptanceCriterion, verdict: str, path: str, title: str = ""
) -> None:
    """Number line with reject/accept bands and the observed probability."""
    fig, ax = plt.subplots(figsize=(6.0, 1.9))
    for i, interval in enumerate(criterion.reject):
        _draw_band(ax, interval, "#c0392b", "reject" if i == 0 else None)
    for i, interval in enumerate(criterion.accept):
        _draw_band(ax, interval, "#27ae60", "accept" if i == 0 else None)
    ax.plot([p], [0.5], marker="v", markersize=10, color="black")
    ax.annotate(f"p = {p:.6g} ({verdict})", (p, 0.56), ha="center", fontsize=9)
    ax.set_xlim(-0.02, 1.02)
    ax.set_yticks([])
    ax.set_xlabel("probability of observing 1")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
