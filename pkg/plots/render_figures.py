#!/usr/bin/env python3
"""Render figures from the simulator's CSV exports.

Strictly a consumer of the CLI's file contract; no physics is computed here.

  fig 2: grid of normalized-energy panels, one per ramp rate
         (exact = dashed black, inertial = red, adiabatic = green,
          corrected = orange when the column is present)
  fig 3: heatmap of the inertial-vs-exact distance over (ramp rate, time)
  fig 4: 3D (h, l, c) trajectories, one panel per ramp rate

Usage:
    python render_figures.py --fig 2 --in <csv_dir> --out fig2.png
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "exact": dict(color="black", linestyle="--", linewidth=1.2, label="exact"),
    "inertial": dict(color="red", linestyle="-", linewidth=1.0, label="inertial"),
    "adiabatic": dict(color="green", linestyle="-", linewidth=1.0, label="adiabatic"),
    "corrected": dict(color="orange", linestyle="-", linewidth=0.8, label="corrected"),
}

FIG2_REQUIRED = ("t", "E_norm_exact", "E_norm_inertial", "E_norm_adiabatic")
FIG3_REQUIRED = ("delta", "t", "D")
FIG4_REQUIRED = ("label", "delta_over_alpha0", "t", "h", "l", "c")


class SchemaMismatch(Exception):
    """Input CSV does not carry a required column."""


@dataclass
class FigureSpec:
    figure_id: str            # "fig2" | "fig3" | "fig4"
    input_files: List[Path]
    output: Path
    style: Dict[str, dict] = field(default_factory=lambda: STYLE)


def read_table(path: Path, required: tuple) -> Dict[str, list]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    for column in required:
        if column not in header:
            raise SchemaMismatch(f"{path.name}: missing required column '{column}'")
    table = {name: [] for name in header}
    for row in rows:
        for name, value in zip(header, row):
            table[name].append(value)
    return table


def _floats(table, column) -> np.ndarray:
    return np.array([float(x) for x in table[column]])


def _delta_from_name(path: Path) -> float:
    # trace/fig2 files are named <prefix>_<delta_ratio>.csv
    stem = path.stem
    try:
        return float(stem.rsplit("_", 1)[-1])
    except ValueError:
        return float("inf")


def render_fig2(spec: FigureSpec):
    files = sorted(spec.input_files, key=_delta_from_name)
    if not files:
        raise SchemaMismatch("no fig2 input files found")
    n = len(files)
    ncols = 3 if n > 2 else n
    nrows = int(np.ceil(n / ncols))
    fig, axes = plt.subplots(nrows, ncols, figsize=(4 * ncols, 2.8 * nrows),
                             squeeze=False, sharex=False)
    panel_tags = "abcdefghijklmnopqrstuvwxyz"
    for i, path in enumerate(files):
        table = read_table(path, FIG2_REQUIRED)
        ax = axes[i // ncols][i % ncols]
        t_ms = _floats(table, "t") * 1e3
        ax.plot(t_ms, _floats(table, "E_norm_inertial"), **spec.style["inertial"])
        if "E_norm_corrected" in table:
            ax.plot(t_ms, _floats(table, "E_norm_corrected"), **spec.style["corrected"])
        ax.plot(t_ms, _floats(table, "E_norm_adiabatic"), **spec.style["adiabatic"])
        ax.plot(t_ms, _floats(table, "E_norm_exact"), **spec.style["exact"])
        tag = panel_tags[i] if i < len(panel_tags) else str(i)
        ax.set_title(f"({tag}) delta = {_delta_from_name(path):g} alpha0", fontsize=9)
        ax.set_xlabel("t [ms]", fontsize=8)
        ax.set_ylabel("E(t)/E(0)", fontsize=8)
        ax.tick_params(labelsize=7)
    for j in range(n, nrows * ncols):
        axes[j // ncols][j % ncols].axis("off")
    axes[0][0].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)


def render_fig3(spec: FigureSpec):
    table = read_table(spec.input_files[0], FIG3_REQUIRED)
    deltas = _floats(table, "delta")
    times = _floats(table, "t")
    dist = _floats(table, "D")
    delta_axis = np.unique(deltas)
    time_axis = np.unique(times)
    grid = np.full((len(delta_axis), len(time_axis)), np.nan)
    d_index = {v: i for i, v in enumerate(delta_axis)}
    t_index = {v: i for i, v in enumerate(time_axis)}
    for d, t, val in zip(deltas, times, dist):
        grid[d_index[d], t_index[t]] = val
    fig, ax = plt.subplots(figsize=(6, 4))
    mesh = ax.pcolormesh(time_axis * 1e3, delta_axis, np.ma.masked_invalid(grid),
                         shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="D")
    ax.set_xlabel("t [ms]")
    ax.set_ylabel("delta / alpha0")
    ax.set_title("distance between inertial and exact solutions")
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)


def render_fig4(spec: FigureSpec):
    table = read_table(spec.input_files[0], FIG4_REQUIRED)
    labels = np.array(table["label"])
    deltas = _floats(table, "delta_over_alpha0")
    h, l, c = (_floats(table, k) for k in ("h", "l", "c"))
    delta_values = sorted(set(deltas))
    fig = plt.figure(figsize=(5 * len(delta_values), 4.5))
    label_style = {
        "exact-liouville": spec.style["exact"],
        "inertial": spec.style["inertial"],
        "adiabatic": spec.style["adiabatic"],
        "corrected": spec.style["corrected"],
    }
    for i, delta in enumerate(delta_values):
        ax = fig.add_subplot(1, len(delta_values), i + 1, projection="3d")
        sel_delta = deltas == delta
        for label in dict.fromkeys(labels[sel_delta]):
            sel = sel_delta & (labels == label)
            style = label_style.get(label, dict(label=label))
            ax.plot(h[sel], l[sel], c[sel], **style)
        ax.set_title(f"delta = {delta:g} alpha0", fontsize=9)
        ax.set_xlabel("<H>", fontsize=8)
        ax.set_ylabel("<L>", fontsize=8)
        ax.set_zlabel("<C>", fontsize=8)
        ax.tick_params(labelsize=6)
    fig.axes[0].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)


RENDERERS = {"fig2": render_fig2, "fig3": render_fig3, "fig4": render_fig4}


def render(spec: FigureSpec):
    """Dispatch on figure id; inputs are never modified."""
    for path in spec.input_files:
        if not path.exists():
            raise SchemaMismatch(f"input file not found: {path}")
    RENDERERS[spec.figure_id](spec)
    return spec.output


def build_spec(fig: str, in_dir: Path, out: Path) -> FigureSpec:
    if fig == "2":
        files = sorted(in_dir.glob("fig2_*.csv"))
        if not files:
            files = sorted(in_dir.glob("trace_*.csv"))
        return FigureSpec("fig2", files, out)
    if fig == "3":
        grid = in_dir / "fig3_grid.csv"
        if not grid.exists():
            grid = in_dir / "distance_grid.csv"
        return FigureSpec("fig3", [grid], out)
    return FigureSpec("fig4", [in_dir / "fig4_trajectories.csv"], out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Render simulator CSV exports.")
    parser.add_argument("--fig", choices=["2", "3", "4"], required=True)
    parser.add_argument("--in", dest="in_dir", required=True, help="CSV directory")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    spec = build_spec(args.fig, Path(args.in_dir), Path(args.out))
    try:
        render(spec)
    except SchemaMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {spec.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
