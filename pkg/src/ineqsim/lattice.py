"""Square-lattice engine: 4-neighbor search space, local tournaments,
synchronous generational replacement, optional snapshot capture."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels, metrics
from .core import AgentState, Reward, Strategy
from .metrics import GenerationRecord, InteractionTally, neighbor_table
from .rng import make_rng, randbelow


@dataclass
class LatticeGrid:
    """rows x cols cells as flat parallel arrays (row-major)."""

    rows: int
    cols: int
    strategies: np.ndarray  # int8 flat
    lams: np.ndarray
    units: np.ndarray
    cb_units: np.ndarray
    torus: bool = True

    @property
    def n(self) -> int:
        return self.rows * self.cols

    @property
    def strategies_grid(self) -> np.ndarray:
        return self.strategies.reshape(self.rows, self.cols)

    def index(self, pos: tuple[int, int]) -> int:
        return pos[0] * self.cols + pos[1]

    def agent(self, pos: tuple[int, int]) -> AgentState:
        i = self.index(pos)
        return AgentState(
            strategy=Strategy(int(self.strategies[i])),
            lam=float(self.lams[i]),
            reward=Reward(int(self.units[i]), int(self.cb_units[i])),
        )


@dataclass(frozen=True)
class LatticeSnapshot:
    generation: int
    text: str
    largest_coop_cluster: int


@dataclass
class LatticeRunResult:
    records: list[GenerationRecord]
    snapshots: list[LatticeSnapshot]


def neighbors(pos: tuple[int, int], grid: LatticeGrid, torus: bool) -> list[tuple[int, int]]:
    """Von Neumann neighborhood in up/down/left/right order.

    Wrapped when torus, clipped at the boundary otherwise; rows and cols
    of at least 3 keep the wrapped neighborhood free of duplicates.
    """
    r, c = pos
    if not (0 <= r < grid.rows and 0 <= c < grid.cols):
        raise ValueError(f"position {pos} out of bounds")
    out = []
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        rr, cc = r + dr, c + dc
        if torus:
            rr %= grid.rows
            cc %= grid.cols
        elif not (0 <= rr < grid.rows and 0 <= cc < grid.cols):
            continue
        out.append((rr, cc))
    return out


def init_grid(cfg, rng) -> LatticeGrid:
    """Initial lattice: same placement and lambda draws as the mixed model,
    over cells in row-major order."""
    from .wellmixed import init_population

    pop = init_population(cfg, rng)
    return LatticeGrid(
        rows=cfg.rows,
        cols=cfg.cols,
        strategies=pop.strategies,
        lams=pop.lams,
        units=pop.units,
        cb_units=pop.cb_units,
        torus=cfg.torus,
    )


def local_binary_tournament(pos: tuple[int, int], grid: LatticeGrid, cfg, rng) -> tuple[int, int]:
    """Parent position for the offspring at pos.

    The pool is the cell's neighborhood, plus the cell itself (appended
    last) when reproduction_includes_self; two distinct pool members are
    drawn, the strictly greater reward value wins, exact ties fall to a
    fair coin.
    """
    pool = neighbors(pos, grid, cfg.torus)
    if cfg.reproduction_includes_self:
        pool = pool + [pos]
    psize = len(pool)
    a = randbelow(rng, psize)
    b = randbelow(rng, psize - 1)
    if b >= a:
        b += 1
    ia, ib = grid.index(pool[a]), grid.index(pool[b])
    va = grid.units[ia] + grid.cb_units[ia] * cfg.cb
    vb = grid.units[ib] + grid.cb_units[ib] * cfg.cb
    if va > vb:
        return pool[a]
    if vb > va:
        return pool[b]
    return pool[a] if rng.random() < 0.5 else pool[b]


def step_lattice_evolution(grid: LatticeGrid, cfg, rng) -> LatticeGrid:
    """Synchronous replacement: every parent is chosen from the old grid."""
    nbr, ncnt = neighbor_table(grid.rows, grid.cols, cfg.torus)
    n = grid.n
    new_strat = np.empty(n, dtype=np.int8)
    new_lam = np.empty(n, dtype=np.float64)
    kernels.reproduce_lattice(
        rng, grid.strategies, grid.lams, grid.units, grid.cb_units,
        cfg.mu, cfg.cb, nbr, ncnt, cfg.reproduction_includes_self,
        new_strat, new_lam,
    )
    return LatticeGrid(
        rows=grid.rows,
        cols=grid.cols,
        strategies=new_strat,
        lams=new_lam,
        units=np.zeros(n, dtype=np.int64),
        cb_units=np.zeros(n, dtype=np.int64),
        torus=grid.torus,
    )


def run_generation_lattice(grid: LatticeGrid, cfg, rng, generation: int = 0) -> GenerationRecord:
    """Play one lattice generation in place and return its metrics record."""
    nbr, ncnt = neighbor_table(grid.rows, grid.cols, cfg.torus)
    n = grid.n
    labels = np.empty(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    coop = np.ascontiguousarray(grid.strategies == 1).view(np.uint8)
    kernels.label_components(coop, nbr, ncnt, labels, stack)
    cluster_sizes = np.bincount(labels[labels >= 0]) if (labels >= 0).any() else None
    order = np.empty(n, dtype=np.int64)
    counts = np.zeros(5, dtype=np.int64)
    kernels.play_generation_lattice(
        rng, grid.strategies, grid.lams, grid.units, grid.cb_units,
        cfg.cb, order, nbr, ncnt, labels, counts,
    )
    tally = InteractionTally(int(counts[0]), int(counts[1]), int(counts[2]), int(counts[3]))
    return GenerationRecord(
        generation=generation,
        f_c=metrics.fraction_cooperators(grid),
        mean_lambda_coop=metrics.mean_lambda_cooperators(grid),
        mean_lambda_all=metrics.mean_lambda_all(grid),
        tally=tally,
        payoff_classes=metrics.payoff_classes(grid),
        largest_coop_cluster=int(cluster_sizes.max()) if cluster_sizes is not None else 0,
        frac_within_cluster=(int(counts[4]) / tally.played) if tally.played else None,
    )


def snapshot(grid: LatticeGrid) -> str:
    """Strategy picture: one line per row, 'C' cooperator / 'D' defector."""
    rows = []
    g = grid.strategies_grid
    for r in range(grid.rows):
        rows.append("".join("C" if v == 1 else "D" for v in g[r]))
    return "\n".join(rows)


def parse_snapshot(text: str) -> np.ndarray:
    """Inverse of snapshot: int8 strategy grid from a 'C'/'D' text block."""
    lines = [ln for ln in text.strip().splitlines()]
    out = np.empty((len(lines), len(lines[0])), dtype=np.int8)
    for r, ln in enumerate(lines):
        if len(ln) != out.shape[1] or any(ch not in "CD" for ch in ln):
            raise ValueError(f"malformed snapshot line {r}: {ln!r}")
        out[r] = [1 if ch == "C" else 0 for ch in ln]
    return out


def run_simulation_lattice(cfg, seed: int | None = None) -> LatticeRunResult:
    """Full deterministic lattice run; snapshots captured when configured.

    With snapshot_every set, generations g with g % snapshot_every == 0
    contribute a snapshot of the strategies that played generation g plus
    the size of the largest cooperative cluster.
    """
    cfg.validate()
    if cfg.model != "lattice":
        raise ValueError("run_simulation_lattice requires model=lattice")
    rng = make_rng(cfg.seed if seed is None else seed)
    grid = init_grid(cfg, rng)
    records: list[GenerationRecord] = []
    snapshots: list[LatticeSnapshot] = []
    for g in range(cfg.gmax):
        grid.units[:] = 0
        grid.cb_units[:] = 0
        rec = run_generation_lattice(grid, cfg, rng, generation=g)
        records.append(rec)
        if cfg.snapshot_every is not None and g % cfg.snapshot_every == 0:
            snapshots.append(
                LatticeSnapshot(g, snapshot(grid), rec.largest_coop_cluster)
            )
        grid = step_lattice_evolution(grid, cfg, rng)
    return LatticeRunResult(records=records, snapshots=snapshots)
