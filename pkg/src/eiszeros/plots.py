"""Two-panel SVG figures: zeros in the fundamental domain and their hauptmodul images."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .forms import build_hauptmodul  # noqa: E402
from .groups import GroupDescriptor  # noqa: E402
from .modular import to_complex  # noqa: E402

plt.rcParams["svg.fonttype"] = "path"  # no font references in the output
plt.rcParams["svg.hashsalt"] = "eiszeros"  # stable ids across runs


def arc_image(group: GroupDescriptor, per_arc: int = 120, precision: int = 64) -> list[list[complex]]:
    """Hauptmodul values along each lower arc, skipping points too close to a cusp."""
    j = build_hauptmodul(group)
    curves = []
    for arc in group.arcs:
        lo, hi = arc.angle_range
        pts = []
        for k in range(per_arc + 1):
            z = arc.point(hi - (hi - lo) * k / per_arc)
            if z.imag < 2e-3 * group.h:
                continue
            pts.append(to_complex(j.value(z, precision)))
        curves.append(pts)
    return curves


def figure(group: GroupDescriptor, series: list[dict], a0: float, a1: float, path) -> None:
    """``series`` holds dicts with ``weight``, ``z`` and ``j`` lists of complex numbers."""
    fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4.6))
    h = group.h
    for arc in group.arcs:
        lo, hi = arc.angle_range
        ts = [lo + (hi - lo) * k / 200 for k in range(201)]
        zs = [arc.point(t) for t in ts]
        left.plot([z.real for z in zs], [z.imag for z in zs], color="black", lw=1.2)
    top = max(group.floor(-h / 2 + h * k / 400) for k in range(401))
    y_max = max(1.6 * top, 0.3 * h)
    for x in (-h / 2, h / 2):
        left.plot([x, x], [group.floor(x), y_max], color="black", lw=1.2)
    cmap = plt.get_cmap("viridis")
    n = max(1, len(series) - 1)
    for k, s in enumerate(series):
        color = cmap(k / n)
        left.scatter([z.real for z in s["z"]], [z.imag for z in s["z"]], s=10, color=color,
                     label=f"w={s['weight']}" if len(series) <= 12 else None, zorder=3)
        right.scatter([j.real for j in s["j"]], [j.imag for j in s["j"]], s=10, color=color, zorder=3)
    left.set_xlim(-h / 2 - 0.05 * h, h / 2 + 0.05 * h)
    left.set_ylim(0, y_max)
    left.set_aspect("equal")
    left.set_title(f"{group.name}: zeros in F")
    if len(series) <= 12:
        left.legend(fontsize=7, loc="upper center", bbox_to_anchor=(0.5, -0.12), ncol=6, frameon=False)

    for curve in arc_image(group):
        right.plot([v.real for v in curve], [v.imag for v in curve], color="0.4", lw=1.0)
    span = a1 - a0
    lo, hi = a0 - 0.1 * span, a1 + 0.1 * span
    pts = [j for s in series for j in s["j"]]
    xs = [p.real for p in pts if math.isfinite(p.real)]
    ys = [abs(p.imag) for p in pts if math.isfinite(p.imag)]
    lo = min([lo] + xs)
    hi = max([hi] + xs)
    right.set_xlim(lo, hi)
    y_half = max([0.1 * span] + [1.1 * y for y in ys])
    right.set_ylim(-y_half, y_half)
    right.axvline(a0, color="tab:red", lw=0.6, ls="--")
    right.axvline(a1, color="tab:red", lw=0.6, ls="--")
    right.set_title(f"image under j  (a0={a0:.6g}, a1={a1:.6g})")
    fig.tight_layout()
    fmt = str(path).rsplit(".", 1)[-1].lower()
    fig.savefig(path, format=fmt, metadata={"Date": None} if fmt == "svg" else None)
    plt.close(fig)
