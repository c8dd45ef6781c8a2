"""Sweep expansion, replicate execution, aggregation, CSV artifacts.

Outputs are a pure function of the sweep specification: cells are ordered
canonically (sorted parameter tuples, then run index), per-run seeds are
derived from the master seed, and result collection restores canonical
order, so the written bytes never depend on scheduling or parallelism.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import SimConfig, SweepSpec, _iter_cells
from .metrics import GenerationRecord
from .rng import derive_run_seed

TIMESERIES_HEADER = (
    "run,generation,f_c,mean_lambda_coop,mean_lambda_all,"
    "games_cc,games_cd,games_dd,games_declined,"
    "largest_coop_cluster,frac_within_cluster,payoff_classes"
)

SWEEP_HEADER = (
    "model,n,rows,cols,ns,cb,mu,runs,gens,burn_in,mean_f_c,std_f_c,mean_lambda_coop"
)


@dataclass(frozen=True)
class ExpandedRun:
    """One scheduled simulation of a sweep."""

    cfg: SimConfig
    cell_index: int
    run_index: int
    seed: int


@dataclass
class SweepRow:
    """Cross-run aggregate for one parameter cell."""

    cfg: SimConfig
    runs: int
    gens: int
    burn_in: int
    mean_f_c: float
    std_f_c: float
    mean_lambda_coop: float | None


def expand_sweep(spec: SweepSpec) -> list[ExpandedRun]:
    """Cross product of parameter values and run indices, canonically ordered.

    Cells are sorted by parameter tuple; seeds mix (master_seed,
    cell_index, run_index). The same spec always expands identically.
    """
    spec.validate()
    out: list[ExpandedRun] = []
    for cfg, cell, _ in _iter_cells(spec):
        for run in range(spec.runs_per_cell):
            out.append(
                ExpandedRun(cfg, cell, run, derive_run_seed(spec.master_seed, cell, run))
            )
    return out


def aggregate(records: list[GenerationRecord], burn_in: int):
    """Time statistics of one run over generations >= burn_in.

    Returns (mean f_c, population std of f_c, mean cooperator lambda
    ignoring generations with no cooperators, or None if there were none).
    """
    if burn_in >= len(records):
        raise ValueError(
            f"aggregation window empty: burn_in={burn_in} >= {len(records)} generations"
        )
    window = records[burn_in:]
    fc = np.array([r.f_c for r in window])
    lam = [r.mean_lambda_coop for r in window if r.mean_lambda_coop is not None]
    return (
        float(fc.mean()),
        float(fc.std()),
        float(np.mean(lam)) if lam else None,
    )


def columns_from_records(run_index: int, records: list[GenerationRecord]) -> dict[str, np.ndarray]:
    """Columnar view of a run's records for compact transfer and CSV writing."""
    g = len(records)
    cols = {
        "run": np.full(g, run_index, dtype=np.int64),
        "generation": np.array([r.generation for r in records], dtype=np.int64),
        "f_c": np.array([r.f_c for r in records]),
        "mean_lambda_coop": np.array(
            [np.nan if r.mean_lambda_coop is None else r.mean_lambda_coop for r in records]
        ),
        "mean_lambda_all": np.array([r.mean_lambda_all for r in records]),
        "games_cc": np.array([r.tally.cc for r in records], dtype=np.int64),
        "games_cd": np.array([r.tally.cd for r in records], dtype=np.int64),
        "games_dd": np.array([r.tally.dd for r in records], dtype=np.int64),
        "games_declined": np.array([r.tally.declined for r in records], dtype=np.int64),
        "largest_coop_cluster": np.array(
            [-1 if r.largest_coop_cluster is None else r.largest_coop_cluster for r in records],
            dtype=np.int64,
        ),
        "frac_within_cluster": np.array(
            [np.nan if r.frac_within_cluster is None else r.frac_within_cluster for r in records]
        ),
        "payoff_classes": np.array([r.payoff_classes for r in records], dtype=np.int64),
    }
    return cols


def fmt_float(x) -> str:
    """Locale-independent 6-significant-digit float field; NaN/None empty."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return ""
    return format(x, ".6g")


def write_timeseries_csv(path: Path, cols: dict[str, np.ndarray]) -> None:
    g = cols["generation"].shape[0]
    lines = [TIMESERIES_HEADER]
    run = cols["run"]
    gen = cols["generation"]
    fc = cols["f_c"]
    mlc = cols["mean_lambda_coop"]
    mla = cols["mean_lambda_all"]
    cc = cols["games_cc"]
    cd = cols["games_cd"]
    dd = cols["games_dd"]
    de = cols["games_declined"]
    lcc = cols["largest_coop_cluster"]
    fwc = cols["frac_within_cluster"]
    pcl = cols["payoff_classes"]
    for t in range(g):
        lines.append(
            f"{run[t]},{gen[t]},{fmt_float(fc[t])},{fmt_float(mlc[t])},"
            f"{fmt_float(mla[t])},{cc[t]},{cd[t]},{dd[t]},{de[t]},"
            f"{'' if lcc[t] < 0 else lcc[t]},{fmt_float(fwc[t])},{pcl[t]}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def sweep_row_line(row: SweepRow) -> str:
    cfg = row.cfg
    n = "" if cfg.n is None else cfg.n
    rows = "" if cfg.rows is None else cfg.rows
    cols = "" if cfg.cols is None else cfg.cols
    ns = "" if cfg.ns is None else cfg.ns
    return (
        f"{cfg.model},{n},{rows},{cols},{ns},{fmt_float(cfg.cb)},{fmt_float(cfg.mu)},"
        f"{row.runs},{row.gens},{row.burn_in},{fmt_float(row.mean_f_c)},"
        f"{fmt_float(row.std_f_c)},{fmt_float(row.mean_lambda_coop)}"
    )


def write_sweep_csv(path: Path, rows: list[SweepRow]) -> None:
    lines = [SWEEP_HEADER] + [sweep_row_line(r) for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _execute_entry(entry: ExpandedRun) -> dict[str, np.ndarray]:
    from .lattice import run_simulation_lattice
    from .wellmixed import run_simulation_mixed

    if entry.cfg.model == "mixed":
        records = run_simulation_mixed(entry.cfg, seed=entry.seed)
    else:
        records = run_simulation_lattice(entry.cfg, seed=entry.seed).records
    return columns_from_records(entry.run_index, records)


def run_experiment(
    spec: SweepSpec, out_dir: Path, parallelism: int = 1, progress: bool = True
) -> list[SweepRow]:
    """Execute every expanded run, write per-run timeseries plus sweep.csv.

    Artifacts land in out_dir: run_<cell>_<index>.csv per run and one
    sweep.csv whose rows aggregate runs_per_cell runs each (cross-run mean
    and population std of the per-run time means over the burn-in-trimmed
    window). Byte-identical output for the same spec at any parallelism.
    """
    if parallelism < 1:
        raise ValueError(f"parallelism={parallelism} must be >= 1")
    entries = expand_sweep(spec)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    results: dict[tuple[int, int], dict[str, np.ndarray]] = {}
    if parallelism == 1:
        for done, entry in enumerate(entries, 1):
            results[(entry.cell_index, entry.run_index)] = _execute_entry(entry)
            _progress(progress, done, len(entries))
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for done, (entry, cols) in enumerate(
                zip(entries, pool.map(_execute_entry, entries)), 1
            ):
                results[(entry.cell_index, entry.run_index)] = cols
                _progress(progress, done, len(entries))
    if progress and sys.stderr.isatty():
        print(file=sys.stderr)

    burn_in = math.ceil(spec.burn_in_frac * spec.gmax)
    rows: list[SweepRow] = []
    for cfg, cell, _ in _iter_cells(spec):
        means = []
        lam_means = []
        for run in range(spec.runs_per_cell):
            cols = results[(cell, run)]
            write_timeseries_csv(out_dir / f"run_{cell:04d}_{run:03d}.csv", cols)
            fc = cols["f_c"][burn_in:]
            means.append(float(fc.mean()))
            lam = cols["mean_lambda_coop"][burn_in:]
            lam = lam[~np.isnan(lam)]
            if lam.size:
                lam_means.append(float(lam.mean()))
        means_arr = np.array(means)
        rows.append(
            SweepRow(
                cfg=cfg,
                runs=spec.runs_per_cell,
                gens=spec.gmax,
                burn_in=burn_in,
                mean_f_c=float(means_arr.mean()),
                std_f_c=float(means_arr.std()),
                mean_lambda_coop=float(np.mean(lam_means)) if lam_means else None,
            )
        )
    write_sweep_csv(out_dir / "sweep.csv", rows)
    return rows


def _progress(enabled: bool, done: int, total: int) -> None:
    if enabled and sys.stderr.isatty():
        print(f"\rrun {done}/{total}", end="", file=sys.stderr, flush=True)
