"""Readers for the simulator's CSV and snapshot file formats.

The renderer consumes files only; these readers validate the contracts.
Extra CSV columns appended by future simulator versions are tolerated,
missing ones never are.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

TIMESERIES_COLUMNS = (
    "run", "generation", "f_c", "mean_lambda_coop", "mean_lambda_all",
    "games_cc", "games_cd", "games_dd", "games_declined",
    "largest_coop_cluster", "frac_within_cluster", "payoff_classes",
)

SWEEP_COLUMNS = (
    "model", "n", "rows", "cols", "ns", "cb", "mu",
    "runs", "gens", "burn_in", "mean_f_c", "std_f_c", "mean_lambda_coop",
)


class RenderInputError(ValueError):
    """Input files are missing, malformed, or violate the format contract."""


def read_columns(path: Path, required: tuple[str, ...]) -> dict[str, list[str]]:
    """CSV as a dict of string columns; missing required names are an error."""
    path = Path(path)
    if not path.exists():
        raise RenderInputError(f"input file {path} does not exist")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RenderInputError(f"{path} is empty (no header)") from None
        missing = [name for name in required if name not in header]
        if missing:
            raise RenderInputError(
                f"{path} header is missing required column(s) {missing}"
            )
        rows = list(reader)
    if not rows:
        raise RenderInputError(f"{path} contains a header but no data rows")
    cols: dict[str, list[str]] = {name: [] for name in header}
    for row in rows:
        if len(row) != len(header):
            raise RenderInputError(
                f"{path}: row with {len(row)} fields, header has {len(header)}"
            )
        for name, val in zip(header, row):
            cols[name].append(val)
    return cols


def floats(col: list[str]) -> np.ndarray:
    """Float column; empty fields become NaN."""
    return np.array([float(v) if v != "" else np.nan for v in col])


def read_timeseries(path: Path) -> dict[str, np.ndarray]:
    cols = read_columns(path, TIMESERIES_COLUMNS)
    return {
        "generation": floats(cols["generation"]).astype(np.int64),
        "f_c": floats(cols["f_c"]),
        "mean_lambda_coop": floats(cols["mean_lambda_coop"]),
        "mean_lambda_all": floats(cols["mean_lambda_all"]),
    }


def read_sweep(path: Path) -> dict[str, object]:
    cols = read_columns(path, SWEEP_COLUMNS)
    out: dict[str, object] = {
        "model": cols["model"],
        "n": cols["n"],
        "rows": cols["rows"],
        "cols": cols["cols"],
        "ns": cols["ns"],
    }
    for name in ("cb", "mu", "mean_f_c", "std_f_c", "mean_lambda_coop"):
        out[name] = floats(cols[name])
    return out


def parse_snapshot_text(text: str, name: str) -> np.ndarray:
    """int8 grid (1 cooperator, 0 defector) from a C/D text block."""
    lines = text.strip().splitlines()
    if not lines:
        raise RenderInputError(f"{name}: empty snapshot")
    width = len(lines[0])
    grid = np.empty((len(lines), width), dtype=np.int8)
    for r, line in enumerate(lines):
        if len(line) != width or any(ch not in "CD" for ch in line):
            raise RenderInputError(f"{name}: malformed snapshot line {r}: {line!r}")
        grid[r] = [1 if ch == "C" else 0 for ch in line]
    return grid


def read_snapshot_dir(path: Path) -> list[tuple[int, np.ndarray, int]]:
    """Chronological (generation, grid, largest cluster size) triples.

    Expects gen_<5 digits>.txt files plus the clusters.csv sidecar
    written alongside them.
    """
    path = Path(path)
    if not path.is_dir():
        raise RenderInputError(f"snapshot directory {path} does not exist")
    files = sorted(path.glob("gen_*.txt"))
    if not files:
        raise RenderInputError(f"no gen_*.txt snapshots in {path}")
    sizes: dict[int, int] = {}
    sidecar = path / "clusters.csv"
    if not sidecar.exists():
        raise RenderInputError(f"missing sidecar {sidecar}")
    side = read_columns(sidecar, ("generation", "largest_coop_cluster"))
    for g, s in zip(side["generation"], side["largest_coop_cluster"]):
        sizes[int(g)] = int(s)
    out = []
    for f in files:
        stem = f.stem  # gen_00042
        try:
            gen = int(stem.split("_", 1)[1])
        except (IndexError, ValueError):
            raise RenderInputError(f"unrecognized snapshot filename {f.name}") from None
        if gen not in sizes:
            raise RenderInputError(f"{sidecar} has no entry for generation {gen}")
        grid = parse_snapshot_text(f.read_text(encoding="utf-8"), f.name)
        out.append((gen, grid, sizes[gen]))
    out.sort(key=lambda t: t[0])
    return out
