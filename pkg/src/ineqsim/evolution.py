"""Generation-boundary operators: tournaments, mutation, reproduction."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .core import LAMBDA_MAX, LAMBDA_MIN, AgentState, Strategy
from .rng import randbelow


@dataclass(frozen=True)
class MutationParams:
    """Per-offspring mutation probability; sensitivity bounds are fixed."""

    mu: float
    lambda_lo: float = LAMBDA_MIN
    lambda_hi: float = LAMBDA_MAX

    def __post_init__(self) -> None:
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu={self.mu} violates 0 <= mu <= 1")


def binary_tournament_mixed(pop, rng, cb: float) -> int:
    """Index of the winner among two distinct uniformly drawn agents.

    Strictly greater reward value wins; an exact tie falls to a fair coin.
    """
    n = pop.n
    a = randbelow(rng, n)
    b = randbelow(rng, n - 1)
    if b >= a:
        b += 1
    va = pop.units[a] + pop.cb_units[a] * cb
    vb = pop.units[b] + pop.cb_units[b] * cb
    if va > vb:
        return a
    if vb > va:
        return b
    return a if rng.random() < 0.5 else b


def mutate(offspring: AgentState, m: MutationParams, rng) -> AgentState:
    """Independently reset the type and perturb lambda, each with prob mu.

    The type reset is uniform over both types (so the effective flip
    probability is mu/2); lambda gains standard normal noise and is
    clamped to [0, 5]. The reward is untouched (the caller zeroes it).
    """
    strategy = offspring.strategy
    lam = offspring.lam
    if rng.random() < m.mu:
        strategy = Strategy.COOPERATOR if rng.random() < 0.5 else Strategy.DEFECTOR
    if rng.random() < m.mu:
        lam = min(m.lambda_hi, max(m.lambda_lo, lam + rng.standard_normal()))
    return replace(offspring, strategy=strategy, lam=lam)


def reproduce_mixed(pop, cfg, rng):
    """New population of N tournament offspring, mutated, rewards zero."""
    from .wellmixed import Population

    n = pop.n
    new_strat = np.empty(n, dtype=np.int8)
    new_lam = np.empty(n, dtype=np.float64)
    kernels.reproduce_mixed(
        rng, pop.strategies, pop.lams, pop.units, pop.cb_units, cfg.mu, cfg.cb,
        new_strat, new_lam,
    )
    return Population(
        strategies=new_strat,
        lams=new_lam,
        units=np.zeros(n, dtype=np.int64),
        cb_units=np.zeros(n, dtype=np.int64),
    )
