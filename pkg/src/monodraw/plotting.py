"""Matplotlib figures for drawings, packings and benchmark reports."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle as CirclePatch  # noqa: E402

from .packing import PrimalDualPacking  # noqa: E402
from .verify import Drawing  # noqa: E402

CLASS_COLORS = {"tree": "#1f77b4", "outerplanar": "#2ca02c", "two-tree": "#d62728", "planar3": "#9467bd"}


def plot_drawing(ax, d: Drawing, witness: Optional[Sequence[int]] = None, title: str = "") -> None:
    for a, b in d.graph.edges:
        (x1, y1), (x2, y2) = d.pos[a], d.pos[b]
        ax.plot([x1, x2], [y1, y2], color="#333333", lw=0.8, zorder=1)
    if d.pos:
        ax.scatter([p[0] for p in d.pos], [p[1] for p in d.pos], s=10, color="#1f77b4", zorder=2)
    if witness:
        ax.plot([d.pos[v][0] for v in witness], [d.pos[v][1] for v in witness], color="#d62728", lw=2.2, zorder=3)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title, fontsize=9)


def plot_packing(ax, p: PrimalDualPacking, witness: Optional[Sequence[int]] = None, title: str = "") -> None:
    oc = p.outer_circle
    ax.add_patch(CirclePatch(oc.center, oc.radius, fill=False, ec="#999999", lw=0.8))
    for c in p.face_circles.values():
        ax.add_patch(CirclePatch(c.center, c.radius, fc="#ffdd99", ec="#cc8800", alpha=0.5, lw=0.6))
    for c in p.vertex_circles:
        ax.add_patch(CirclePatch(c.center, c.radius, fc="#99ccff", ec="#1f77b4", alpha=0.4, lw=0.6))
    d = Drawing(p.graph, [c.center for c in p.vertex_circles])
    plot_drawing(ax, d, witness, title)
    ax.autoscale_view()


def _by_class(rows: List[Dict], key: str):
    groups: Dict[str, tuple] = {}
    for r in rows:
        if r.get(key) is None or r.get("built") != 1:
            continue
        xs, ys = groups.setdefault(r["class"], ([], []))
        xs.append(r["n"])
        ys.append(r[key])
    return groups


def scatter_by_class(rows: List[Dict], key: str, ylabel: str, path: str, log: bool = False) -> None:
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for cls, (xs, ys) in sorted(_by_class(rows, key).items()):
        if log:
            pairs = [(x, y) for x, y in zip(xs, ys) if y > 0]
            xs, ys = [x for x, _ in pairs], [y for _, y in pairs]
        ax.scatter(xs, ys, s=14, label=cls, color=CLASS_COLORS.get(cls))
    if log:
        ax.set_yscale("log")
    ax.set_xlabel("vertices")
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def success_bars(rows: List[Dict], path: str) -> None:
    classes = sorted({r["class"] for r in rows})
    rate = []
    for c in classes:
        sub = [r for r in rows if r["class"] == c]
        rate.append(sum(r["strongly_monotone"] == 1 for r in sub) / len(sub))
    fig, ax = plt.subplots(figsize=(5.5, 3.2))
    ax.bar(classes, rate, color=[CLASS_COLORS.get(c) for c in classes])
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("verified fraction")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def gallery(items: List[tuple], path: str) -> None:
    """One panel per (title, Drawing or PrimalDualPacking)."""
    cols = max(1, len(items))
    fig, axes = plt.subplots(1, cols, figsize=(3.2 * cols, 3.4), squeeze=False)
    for ax, (title, obj) in zip(axes[0], items):
        if isinstance(obj, PrimalDualPacking):
            plot_packing(ax, obj, title=title)
        else:
            plot_drawing(ax, obj, title=title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
