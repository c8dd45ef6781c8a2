"""Per-generation observables and lattice cluster analysis."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels

# Encoding for exact reward-pair identity: units in the high half,
# cb_units in the low. Counts stay far below 2^32 in any one generation.
_PAIR_SHIFT = 32


@dataclass
class InteractionTally:
    """Played-game classes plus declined attempts for one generation."""

    cc: int = 0
    cd: int = 0
    dd: int = 0
    declined: int = 0

    @property
    def attempts(self) -> int:
        return self.cc + self.cd + self.dd + self.declined

    @property
    def played(self) -> int:
        return self.cc + self.cd + self.dd


@dataclass
class GenerationRecord:
    """Metrics row for the population as it played one generation."""

    generation: int
    f_c: float
    mean_lambda_coop: float | None
    mean_lambda_all: float
    tally: InteractionTally
    payoff_classes: int
    largest_coop_cluster: int | None = None
    frac_within_cluster: float | None = None


def _strategies(pop_or_grid) -> np.ndarray:
    arr = pop_or_grid if isinstance(pop_or_grid, np.ndarray) else pop_or_grid.strategies
    return np.asarray(arr)


def fraction_cooperators(pop_or_grid) -> float:
    strat = _strategies(pop_or_grid)
    if strat.size == 0:
        raise ValueError("empty population")
    return int((strat == 1).sum()) / strat.size


def mean_lambda_cooperators(pop_or_grid) -> float | None:
    """Mean sensitivity over cooperators; None when there are none."""
    strat = _strategies(pop_or_grid).ravel()
    lams = np.asarray(pop_or_grid.lams).ravel()
    mask = strat == 1
    if not mask.any():
        return None
    return float(lams[mask].mean())


def mean_lambda_all(pop_or_grid) -> float:
    return float(np.asarray(pop_or_grid.lams).mean())


def payoff_classes(pop_or_grid) -> int:
    """Number of distinct exact reward pairs in the population."""
    units = np.asarray(pop_or_grid.units, dtype=np.int64).ravel()
    cbu = np.asarray(pop_or_grid.cb_units, dtype=np.int64).ravel()
    return int(np.unique((units << _PAIR_SHIFT) + cbu).size)


@lru_cache(maxsize=64)
def neighbor_table(rows: int, cols: int, torus: bool) -> tuple[np.ndarray, np.ndarray]:
    """Flat von Neumann adjacency: (nbr [n,4] padded with -1, counts [n]).

    Neighbor order is up, down, left, right; out-of-bounds entries are
    dropped when torus is False.
    """
    n = rows * cols
    nbr = np.full((n, 4), -1, dtype=np.int64)
    ncnt = np.zeros(n, dtype=np.int64)
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                rr, cc = r + dr, c + dc
                if torus:
                    rr %= rows
                    cc %= cols
                elif not (0 <= rr < rows and 0 <= cc < cols):
                    continue
                nbr[i, ncnt[i]] = rr * cols + cc
                ncnt[i] += 1
    nbr.setflags(write=False)
    ncnt.setflags(write=False)
    return nbr, ncnt


def coop_components(grid_or_strategies, torus: bool | None = None) -> np.ndarray:
    """Label cooperator cells into connected components.

    Accepts a LatticeGrid (its own torus flag applies unless overridden)
    or a 2-d strategy array plus an explicit torus flag. Returns a 2-d
    int array of component ids, -1 on defector cells.
    """
    if isinstance(grid_or_strategies, np.ndarray):
        strat2d = grid_or_strategies
        if torus is None:
            raise ValueError("torus flag required with a bare strategy array")
    else:
        strat2d = grid_or_strategies.strategies_grid
        if torus is None:
            torus = grid_or_strategies.torus
    rows, cols = strat2d.shape
    nbr, ncnt = neighbor_table(rows, cols, bool(torus))
    coop = np.ascontiguousarray(strat2d.ravel() == 1).view(np.uint8)
    labels = np.empty(rows * cols, dtype=np.int64)
    stack = np.empty(rows * cols, dtype=np.int64)
    kernels.label_components(coop, nbr, ncnt, labels, stack)
    return labels.reshape(rows, cols)


def largest_coop_cluster(grid_or_strategies, torus: bool | None = None) -> int:
    """Size of the biggest cooperator component; 0 with no cooperators."""
    labels = coop_components(grid_or_strategies, torus)
    flat = labels[labels >= 0]
    if flat.size == 0:
        return 0
    return int(np.bincount(flat).max())


def within_cluster_fraction(games, labels: np.ndarray) -> float | None:
    """Fraction of played games whose endpoints share a cooperator component.

    ``games`` is an iterable of (pos_i, pos_j, (strat_i, strat_j)) tuples
    with (row, col) positions; ``labels`` comes from coop_components on the
    same generation's strategies. None when no games were played.
    """
    games = list(games)
    if not games:
        return None
    within = 0
    for pos_i, pos_j, (s_i, s_j) in games:
        if s_i == 1 and s_j == 1 and labels[pos_i] == labels[pos_j]:
            within += 1
    return within / len(games)
