"""Static SVG plot emission for verification runs.

Output is deterministic: a fixed hash salt replaces matplotlib's random
element ids and the SVG date metadata is suppressed.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "starbody"
import matplotlib.pyplot as plt

__all__ = ["ovr_curve_svg", "section_hist_svg", "moment_scatter_svg", "plots_from_rows"]

_SAVE_KW = {"format": "svg", "metadata": {"Date": None}}


def ovr_curve_svg(points, path, title="outer volume ratio vs k"):
    """points: list of dicts with keys k, ovr, bound (and optionally body/n)."""
    fig, ax = plt.subplots(figsize=(6, 4))
    by_label = {}
    for p in points:
        label = p.get("label", "body")
        by_label.setdefault(label, []).append(p)
    for label, pts in sorted(by_label.items()):
        pts = sorted(pts, key=lambda q: q["k"])
        ks = [q["k"] for q in pts]
        ax.plot(ks, [q["ovr"] for q in pts], "o-", label=f"{label} measured")
        ax.plot(ks, [q["bound"] for q in pts], "--", label=f"{label} bound")
    ax.set_xlabel("k")
    ax.set_ylabel("(|C|/|K|)^(1/n)")
    ax.set_title(title)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def section_hist_svg(values, path, title="section volume distribution"):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(values, bins=40)
    ax.set_xlabel("|K cap F|")
    ax.set_ylabel("count")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def moment_scatter_svg(pairs, path, title="measured vs target"):
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    ax.scatter(xs, ys, s=12)
    lo = min(xs + ys) if pairs else 0.0
    hi = max(xs + ys) if pairs else 1.0
    ax.plot([lo, hi], [lo, hi], "k--", linewidth=0.8)
    ax.set_xlabel("target")
    ax.set_ylabel("measured")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def plots_from_rows(rows, out_dir) -> list:
    """Emit the standard plots derivable from report rows; returns paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    ovr_points = []
    for row in rows:
        if row.get("anchor") == "outer-volume-ratio" and "k" in row.get("inputs", {}):
            extras = row.get("extras", {})
            if "bound" in extras:
                ovr_points.append(
                    {
                        "k": row["inputs"]["k"],
                        "ovr": row["value"],
                        "bound": extras["bound"],
                        "label": f"{row['inputs'].get('body', '?')} n={row['inputs'].get('n', '?')}",
                    }
                )
    if ovr_points:
        p = out / "ovr_curves.svg"
        ovr_curve_svg(ovr_points, p)
        written.append(p)

    spreads = [
        row["extras"]["delta"]
        for row in rows
        if row.get("anchor") == "section-spread-roundness" and "delta" in row.get("extras", {})
    ]
    if spreads:
        p = out / "section_spread_hist.svg"
        section_hist_svg(spreads, p, title="per-dimension section spread delta")
        written.append(p)

    pairs = [
        (row["target"], row["value"])
        for row in rows
        if row.get("anchor", "").startswith("norm-moment") and row.get("target") and row.get("value")
    ]
    if pairs:
        p = out / "moment_scatter.svg"
        moment_scatter_svg(pairs, p)
        written.append(p)
    return written


def load_rows(report_json_path):
    payload = json.loads(Path(report_json_path).read_text())
    return payload.get("rows", [])
