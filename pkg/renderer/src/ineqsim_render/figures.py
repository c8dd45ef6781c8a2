"""Figure builders for the four render kinds.

Each builder returns a matplotlib Figure whose plotted data is exactly the
input's data range (no clipping, no interpolation across gaps); saving is
the caller's business.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import RenderInputError, read_snapshot_dir, read_sweep, read_timeseries


def render_timeseries(csv_path: Path):
    """Two stacked panels: cooperation level and cooperators' mean lambda.

    The x axis spans exactly the file's generation range; generations with
    no cooperators leave gaps in the lambda panel.
    """
    data = read_timeseries(csv_path)
    gen = data["generation"]
    fig, (ax_fc, ax_lam) = plt.subplots(
        2, 1, sharex=True, figsize=(9, 5), constrained_layout=True
    )
    ax_fc.plot(gen, data["f_c"], lw=0.8, color="tab:blue")
    ax_fc.set_ylabel("fraction of cooperators")
    ax_fc.set_ylim(0.0, 1.0)
    ax_lam.plot(gen, data["mean_lambda_coop"], lw=0.8, color="tab:orange")
    ax_lam.set_ylabel("mean lambda (cooperators)")
    ax_lam.set_xlabel("generation")
    ax_lam.set_ylim(0.0, 5.0)
    ax_fc.set_xlim(int(gen.min()), int(gen.max()))
    return fig


def _group_labels(sweep: dict, group_by: str) -> list[str]:
    """Per-row group label; lattice rows fall back to their grid size."""
    if group_by not in ("n", "ns"):
        raise RenderInputError(f"group-by must be 'n' or 'ns', got {group_by!r}")
    labels = []
    for i, raw in enumerate(sweep[group_by]):
        if raw != "":
            labels.append(raw)
        elif group_by == "n" and sweep["rows"][i] != "":
            labels.append(f"{sweep['rows'][i]}x{sweep['cols'][i]}")
        else:
            raise RenderInputError(
                f"sweep row {i} has no value for group key {group_by!r}"
            )
    return labels


def render_sweep_curves(csv_path: Path, group_by: str = "ns"):
    """mean_f_c vs cb, one error-bar line per group key value."""
    sweep = read_sweep(csv_path)
    labels = _group_labels(sweep, group_by)
    fig, ax = plt.subplots(figsize=(6, 4.5), constrained_layout=True)
    for label in sorted(set(labels), key=_label_key):
        idx = np.array([i for i, l in enumerate(labels) if l == label])
        order = idx[np.argsort(sweep["cb"][idx])]
        ax.errorbar(
            sweep["cb"][order], sweep["mean_f_c"][order],
            yerr=sweep["std_f_c"][order],
            marker="o", ms=4, capsize=3, label=f"{group_by}={label}",
        )
    ax.set_xlabel("cost-to-benefit ratio c/b")
    ax.set_ylabel("mean fraction of cooperators")
    ax.set_ylim(0.0, 1.0)
    ax.legend()
    return fig


def _label_key(label: str):
    try:
        return (0, float(label.split("x")[0]), label)
    except ValueError:
        return (1, 0.0, label)


def render_sweep_heatmap(csv_path: Path):
    """mean_f_c on the (ns, n) plane at a single cb, color scale [0, 1]."""
    sweep = read_sweep(csv_path)
    cbs = set(np.round(sweep["cb"], 12).tolist())
    if len(cbs) != 1:
        raise RenderInputError(
            f"heatmap requires a single cb value, found {sorted(cbs)}"
        )
    if any(v == "" for v in sweep["n"]) or any(v == "" for v in sweep["ns"]):
        raise RenderInputError("heatmap requires mixed-model rows with n and ns")
    n_vals = sorted({int(v) for v in sweep["n"]})
    ns_vals = sorted({int(v) for v in sweep["ns"]})
    grid = np.full((len(n_vals), len(ns_vals)), np.nan)
    for i in range(len(sweep["mean_f_c"])):
        r = n_vals.index(int(sweep["n"][i]))
        c = ns_vals.index(int(sweep["ns"][i]))
        grid[r, c] = sweep["mean_f_c"][i]
    if np.isnan(grid).any():
        missing = int(np.isnan(grid).sum())
        raise RenderInputError(
            f"incomplete ns x n grid: {missing} of {grid.size} cells missing"
        )
    fig, ax = plt.subplots(figsize=(6, 4.5), constrained_layout=True)
    im = ax.imshow(
        grid, origin="lower", aspect="auto", vmin=0.0, vmax=1.0, cmap="viridis"
    )
    ax.set_xticks(range(len(ns_vals)), [str(v) for v in ns_vals])
    ax.set_yticks(range(len(n_vals)), [str(v) for v in n_vals])
    ax.set_xlabel("search space ns")
    ax.set_ylabel("population size n")
    fig.colorbar(im, ax=ax, label="mean fraction of cooperators")
    return fig


def render_snapshots(snapshot_dir: Path, columns: int = 8):
    """Chronological montage of strategy grids.

    Defectors render dark, cooperators light; every tile's title is the
    recorded size of the largest cooperative cluster at that generation.
    """
    snaps = read_snapshot_dir(snapshot_dir)
    tiles = len(snaps)
    ncols = min(columns, tiles)
    nrows = math.ceil(tiles / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(1.4 * ncols, 1.7 * nrows), constrained_layout=True,
        squeeze=False,
    )
    for k, ax in enumerate(axes.ravel()):
        if k >= tiles:
            ax.axis("off")
            continue
        gen, grid, largest = snaps[k]
        ax.imshow(grid, cmap="gray", vmin=0, vmax=1, interpolation="nearest")
        ax.set_title(str(largest), fontsize=9)
        ax.set_xticks([])
        ax.set_yticks([])
        ax.set_xlabel(f"g={gen}", fontsize=7)
    return fig


def save_figure(fig, out_path: Path, vector: bool = False) -> list[Path]:
    """Write the lossless raster, plus a vector twin when asked."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    written = [out_path]
    fig.savefig(out_path, dpi=150)
    if vector:
        twin = out_path.with_suffix(".svg")
        fig.savefig(twin)
        written.append(twin)
    return written
