"""Complete-mixing engine: each agent screens a random candidate sample.

One generation: every agent, in a fresh random order, initiates exactly
one sample-select-attempt cycle; reward updates land immediately, so later
initiators see them. Reproduction then replaces the whole population.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, metrics
from .core import AgentState, Reward, Strategy
from .evolution import reproduce_mixed
from .metrics import GenerationRecord, InteractionTally
from .rng import make_rng, randbelow


@dataclass
class Population:
    """Ordered, fixed-size agent collection as parallel arrays."""

    strategies: np.ndarray  # int8, 1 cooperator / 0 defector
    lams: np.ndarray        # float64
    units: np.ndarray       # int64 payoff-1 receipts
    cb_units: np.ndarray    # int64 payoff-cb receipts

    @property
    def n(self) -> int:
        return self.strategies.shape[0]

    def agent(self, i: int) -> AgentState:
        return AgentState(
            strategy=Strategy(int(self.strategies[i])),
            lam=float(self.lams[i]),
            reward=Reward(int(self.units[i]), int(self.cb_units[i])),
        )

    @classmethod
    def from_agents(cls, agents) -> "Population":
        agents = list(agents)
        return cls(
            strategies=np.array([int(a.strategy) for a in agents], dtype=np.int8),
            lams=np.array([a.lam for a in agents], dtype=np.float64),
            units=np.array([a.reward.units for a in agents], dtype=np.int64),
            cb_units=np.array([a.reward.cb_units for a in agents], dtype=np.int64),
        )

    def copy(self) -> "Population":
        return Population(
            self.strategies.copy(), self.lams.copy(),
            self.units.copy(), self.cb_units.copy(),
        )


def init_population(cfg, rng) -> Population:
    """Fresh population: an exact cooperator share placed uniformly, lambdas
    uniform on the configured interval, rewards zero."""
    n = cfg.population_size
    k = round(cfg.init_coop_frac * n)
    pool = list(range(n))
    for t in range(k):
        j = t + randbelow(rng, n - t)
        pool[t], pool[j] = pool[j], pool[t]
    strategies = np.zeros(n, dtype=np.int8)
    strategies[pool[:k]] = 1
    lo, hi = cfg.lambda_init_lo, cfg.lambda_init_hi
    lams = np.empty(n, dtype=np.float64)
    for a in range(n):
        lams[a] = lo + (hi - lo) * rng.random()
    return Population(
        strategies=strategies,
        lams=lams,
        units=np.zeros(n, dtype=np.int64),
        cb_units=np.zeros(n, dtype=np.int64),
    )


def sample_candidates(i: int, n: int, ns: int, rng) -> list[int]:
    """ns distinct indices drawn uniformly from {0..n-1} minus i."""
    if not 1 <= ns <= n - 1:
        raise ValueError(f"ns={ns} violates 1 <= ns <= n-1 (n={n})")
    pool = [a for a in range(n) if a != i]
    m = len(pool)
    for t in range(ns):
        j = t + randbelow(rng, m - t)
        pool[t], pool[j] = pool[j], pool[t]
    return pool[:ns]


def select_partner(i: int, candidates, pop: Population, rng, cb: float) -> int:
    """The candidate maximizing i's acceptance probability.

    For positive lambda that is the set of candidates at exactly minimal
    reward distance; for lambda zero every candidate ties. Ties break
    uniformly (one draw, consumed only when more than one candidate ties).
    """
    candidates = list(candidates)
    vi = pop.units[i] + pop.cb_units[i] * cb
    li = pop.lams[i]
    if li == 0.0:
        tied = candidates
    else:
        dists = [abs(vi - (pop.units[c] + pop.cb_units[c] * cb)) for c in candidates]
        best = min(dists)
        tied = [c for c, d in zip(candidates, dists) if d == best]
    if len(tied) > 1:
        return tied[randbelow(rng, len(tied))]
    return tied[0]


def attempt_interaction(i: int, j: int, pop: Population, p, rng, tally: InteractionTally) -> bool:
    """Play the pair with the interaction probability; mutates rewards/tally.

    A declined attempt only bumps the declined counter; there is no retry
    and no alternative partner.
    """
    cb = p.cb
    vi = pop.units[i] + pop.cb_units[i] * cb
    vj = pop.units[j] + pop.cb_units[j] * cb
    d = abs(vi - vj)
    prob = math.exp(-(pop.lams[i] + pop.lams[j]) * d)
    if rng.random() >= prob:
        tally.declined += 1
        return False
    si, sj = int(pop.strategies[i]), int(pop.strategies[j])
    if si == 1 and sj == 1:
        pop.units[i] += 1
        pop.units[j] += 1
        tally.cc += 1
    elif si == 1:
        pop.units[j] += 1
        pop.cb_units[j] += 1
        tally.cd += 1
    elif sj == 1:
        pop.units[i] += 1
        pop.cb_units[i] += 1
        tally.cd += 1
    else:
        pop.cb_units[i] += 1
        pop.cb_units[j] += 1
        tally.dd += 1
    return True


def run_generation_mixed(pop: Population, cfg, rng, generation: int = 0) -> GenerationRecord:
    """Play one generation in place and return its metrics record."""
    n = pop.n
    order = np.empty(n, dtype=np.int64)
    scratch = np.empty(n, dtype=np.int64)
    counts = np.zeros(4, dtype=np.int64)
    kernels.play_generation_mixed(
        rng, pop.strategies, pop.lams, pop.units, pop.cb_units,
        cfg.ns, cfg.cb, order, scratch, counts,
    )
    tally = InteractionTally(int(counts[0]), int(counts[1]), int(counts[2]), int(counts[3]))
    return GenerationRecord(
        generation=generation,
        f_c=metrics.fraction_cooperators(pop),
        mean_lambda_coop=metrics.mean_lambda_cooperators(pop),
        mean_lambda_all=metrics.mean_lambda_all(pop),
        tally=tally,
        payoff_classes=metrics.payoff_classes(pop),
    )


def run_simulation_mixed(cfg, seed: int | None = None) -> list[GenerationRecord]:
    """Full deterministic run: init, then gmax play+reproduce cycles.

    Metrics are recorded each generation for the population that played
    (the post-mutation composition of that generation). Identical
    (cfg, seed) always produce identical record lists.
    """
    cfg.validate()
    if cfg.model != "mixed":
        raise ValueError("run_simulation_mixed requires model=mixed")
    rng = make_rng(cfg.seed if seed is None else seed)
    pop = init_population(cfg, rng)
    records: list[GenerationRecord] = []
    for g in range(cfg.gmax):
        pop.units[:] = 0
        pop.cb_units[:] = 0
        records.append(run_generation_mixed(pop, cfg, rng, generation=g))
        pop = reproduce_mixed(pop, cfg, rng)
    return records
