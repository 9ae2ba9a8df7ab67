"""Static SVG plots rendered from result CSVs.

Both entry points are pure functions of their input file: selection-rate
curves from a rates CSV, and circular centrality profiles from a profile
CSV. A header-only CSV yields an empty-axes figure rather than an error.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _read_csv(path) -> list[dict]:
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty file, expected a CSV header")
        return list(reader)


def _save(fig, out_path) -> None:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_rates(in_path, out_path) -> None:
    """Selection rate against sample count, one line per (filter, p) series."""
    rows = _read_csv(in_path)
    for required in ("filter", "m", "rate"):
        if rows and required not in rows[0]:
            raise ValueError(f"{in_path}: missing column {required!r}")
    series: dict[tuple, list[tuple[int, float, float, float]]] = {}
    for row in rows:
        key = (row.get("filter", ""), row.get("p", ""))
        try:
            point = (
                int(row["m"]),
                float(row["rate"]),
                float(row.get("wilson_low") or row["rate"]),
                float(row.get("wilson_high") or row["rate"]),
            )
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{in_path}: malformed rates row {row!r}") from exc
        series.setdefault(key, []).append(point)

    filters = {key[0] for key in series}
    ps = {key[1] for key in series}
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for key in sorted(series):
        filt, p = key
        label_parts = []
        if len(filters) > 1 or not ps.difference({""}):
            label_parts.append(filt)
        if len(ps) > 1 and p != "":
            label_parts.append(f"p={p}")
        label = ", ".join(label_parts) or filt
        points = sorted(series[key])
        ms = [pt[0] for pt in points]
        rates = [pt[1] for pt in points]
        lows = [pt[2] for pt in points]
        highs = [pt[3] for pt in points]
        (line,) = ax.plot(ms, rates, marker="o", markersize=3, label=label)
        ax.fill_between(ms, lows, highs, color=line.get_color(), alpha=0.15, linewidth=0)
    ax.set_xlabel("samples m")
    ax.set_ylabel("rate of optimal selection")
    ax.set_ylim(-0.02, 1.02)
    if series:
        ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, out_path)


def plot_profile(in_path, out_path) -> None:
    """Centrality values around a circle, one polar panel per rewiring p."""
    rows = _read_csv(in_path)
    panels: dict[str, list[tuple[int, float, float]]] = {}
    for row in rows:
        try:
            panels.setdefault(row["p"], []).append(
                (int(row["node"]), float(row["centrality"]), float(row["reference"]))
            )
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{in_path}: malformed profile row {row!r}") from exc

    keys = sorted(panels, key=lambda s: float(s))
    count = max(1, len(panels))
    fig, axes = plt.subplots(
        1, count, figsize=(3.0 * count, 3.2), subplot_kw={"projection": "polar"}
    )
    if count == 1:
        axes = [axes]
    if not panels:
        axes[0].set_xticks([])
    for ax, key in zip(axes, keys):
        points = sorted(panels[key])
        n = len(points)
        theta = [2.0 * math.pi * node / n for node, _, _ in points]
        values = [value for _, value, _ in points]
        reference = points[0][2]
        ax.plot(theta + theta[:1], values + values[:1], linewidth=0.8)
        ax.plot(
            [2.0 * math.pi * i / 256 for i in range(257)],
            [reference] * 257,
            linestyle="--", color="red", linewidth=0.8,
        )
        ax.set_title(f"p={key}", fontsize=9)
        ax.set_xticks([])
        ax.tick_params(labelsize=6)
    fig.tight_layout()
    _save(fig, out_path)
