#!/usr/bin/env python3
"""Plot the CSV tables produced by `chain-entropy figures`.

Usage:
    chain-entropy figures --which 3 --alpha 2 --X 100,200,400 --out out/
    chain-entropy figures --which 4 --alpha 2 --X 100,200,400 --out out/
    chain-entropy figures --which 5 --alpha 1 --X 100 --out out/
    python3 scripts/plot_figures.py out/

Requires matplotlib; this script is a convenience for inspecting results,
not part of the library.
"""

import csv
import sys
from pathlib import Path

import matplotlib.pyplot as plt


def read_rows(path):
    with open(path) as fh:
        rows = [r for r in csv.DictReader(
            line for line in fh if not line.startswith("#"))]
    return rows


def plot_flow(path, ax, title):
    rows = read_rows(path)
    sizes = sorted({r["X"] for r in rows}, key=int)
    for x in sizes:
        pts = [(float(r["theta_marker"]), float(r["S_numeric"]))
               for r in rows if r["X"] == x]
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o", ms=4,
                label=f"numeric, X={x}")
    pts = [(float(r["theta_marker"]), float(r["S_conjectured"]))
           for r in rows if r["X"] == sizes[-1]]
    pts.sort()
    ax.plot([p[0] for p in pts], [p[1] for p in pts], "-k", lw=1,
            label="conjectured law")
    ax.set_xlabel("leading discontinuity angle")
    ax.set_ylabel("S_2")
    ax.set_title(title)
    ax.legend(fontsize=8)


def plot_map(path, ax):
    rows = read_rows(path)
    grid = [r for r in rows if r["kind"] == "grid"]
    flow = [r for r in rows if r["kind"] == "flow"]
    sc = ax.scatter([float(r["gamma"]) for r in grid],
                    [float(r["h"]) for r in grid],
                    c=[float(r["S"]) for r in grid], s=60, cmap="viridis")
    ax.scatter([float(r["gamma"]) for r in flow],
               [float(r["h"]) for r in flow],
               c="red", s=12, label="boost trajectories")
    plt.colorbar(sc, ax=ax, label="S")
    ax.set_xlabel("anisotropy")
    ax.set_ylabel("field")
    ax.set_title("constant-entropy conics")
    ax.legend(fontsize=8)


def main(out_dir):
    out = Path(out_dir)
    panels = []
    if (out / "fig3.csv").exists():
        panels.append(("fig3.csv", "parity-preserving flow", plot_flow))
    if (out / "fig4.csv").exists():
        panels.append(("fig4.csv", "Dirac-sea flow", plot_flow))
    if (out / "fig5.csv").exists():
        panels.append(("fig5.csv", None, None))
    if not panels:
        sys.exit(f"no figure CSVs found under {out}")
    fig, axes = plt.subplots(1, len(panels), figsize=(6 * len(panels), 5))
    if len(panels) == 1:
        axes = [axes]
    for ax, (name, title, fn) in zip(axes, panels):
        if fn is None:
            plot_map(out / name, ax)
        else:
            fn(out / name, ax, title)
    fig.tight_layout()
    target = out / "figures.png"
    fig.savefig(target, dpi=150)
    print(f"wrote {target}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
