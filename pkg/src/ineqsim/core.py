"""Pure model primitives: strategies, exact rewards, payoffs, and the
inequity-biased acceptance/interaction probabilities.

Everything here is a stateless function over small value types. The
simulation engines carry the same quantities in numpy arrays; these
definitions are the single place where the formulas live in scalar form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

LAMBDA_MIN = 0.0
LAMBDA_MAX = 5.0


class Strategy(IntEnum):
    """The two unconditional player types."""

    DEFECTOR = 0
    COOPERATOR = 1


@dataclass(frozen=True)
class Reward:
    """Accumulated payoff as an exact pair of receipt counts.

    ``units`` counts payoff-1 receipts, ``cb_units`` counts payoff-(c/b)
    receipts; the numeric value is ``units + cb_units * cb``. Keeping the
    pair exact makes payoff equality well defined (no float drift), which
    tie detection in partner selection and tournaments relies on.
    """

    units: int = 0
    cb_units: int = 0

    def __post_init__(self) -> None:
        if self.units < 0 or self.cb_units < 0:
            raise ValueError("reward counts must be nonnegative")

    def value(self, cb: float) -> float:
        return float(self.units) + float(self.cb_units) * cb

    def __add__(self, other: "Reward") -> "Reward":
        return Reward(self.units + other.units, self.cb_units + other.cb_units)


@dataclass(frozen=True)
class PayoffParams:
    """Cost-to-benefit ratio of the normalized prisoner's dilemma."""

    cb: float

    def __post_init__(self) -> None:
        if not 0.0 < self.cb < 1.0:
            raise ValueError(f"cb={self.cb} violates 0 < cb < 1")


@dataclass(frozen=True)
class FehrSchmidtParams:
    """Sensitivity coefficients of the reference inequity-averse utility."""

    k1: float
    k2: float

    def __post_init__(self) -> None:
        if not self.k1 < self.k2:
            raise ValueError(f"k1={self.k1} must be strictly less than k2={self.k2}")
        if not 0.0 <= self.k2 <= 1.0:
            raise ValueError(f"k2={self.k2} must lie in [0, 1]")


@dataclass
class AgentState:
    strategy: Strategy
    lam: float
    reward: Reward = Reward()

    def __post_init__(self) -> None:
        if not LAMBDA_MIN <= self.lam <= LAMBDA_MAX:
            raise ValueError(f"lambda={self.lam} outside [{LAMBDA_MIN}, {LAMBDA_MAX}]")


def normalized_payoffs(p: PayoffParams) -> np.ndarray:
    """2x2 payoff matrix for the focal player, rows/cols ordered (C, D).

    Row is the focal player's strategy, column the opponent's:
    ``[[1, 0], [1 + cb, cb]]``.
    """
    return np.array([[1.0, 0.0], [1.0 + p.cb, p.cb]])


# Exact per-game increments as (units, cb_units) pairs, keyed by the
# (focal, opponent) strategies. 1 + cb is a unit plus a cb receipt.
_INCREMENTS = {
    (Strategy.COOPERATOR, Strategy.COOPERATOR): Reward(1, 0),
    (Strategy.COOPERATOR, Strategy.DEFECTOR): Reward(0, 0),
    (Strategy.DEFECTOR, Strategy.COOPERATOR): Reward(1, 1),
    (Strategy.DEFECTOR, Strategy.DEFECTOR): Reward(0, 1),
}


def payoff(s_i: Strategy, s_j: Strategy, p: PayoffParams) -> tuple[Reward, Reward]:
    """Reward increments for one game, as exact pairs for both players."""
    return _INCREMENTS[(s_i, s_j)], _INCREMENTS[(s_j, s_i)]


def reward_distance(r_i: Reward, r_j: Reward, cb: float) -> float:
    """|value(r_i) - value(r_j)|, computed as a difference of cached values.

    This exact expression (value each pair, then subtract) is the canonical
    form used everywhere, so equal pairs always compare as exactly equal.
    """
    return abs(r_i.value(cb) - r_j.value(cb))


def accept_probability(lam_i: float, r_i: Reward, r_j: Reward, p: PayoffParams) -> float:
    """Probability that player i accepts j as a partner: exp(-lam_i * |dr|)."""
    return math.exp(-lam_i * reward_distance(r_i, r_j, p.cb))


def interaction_probability(
    lam_i: float, lam_j: float, r_i: Reward, r_j: Reward, p: PayoffParams
) -> float:
    """Mutual-consent interaction probability exp(-(lam_i + lam_j) * |dr|).

    Equals accept_probability(i -> j) * accept_probability(j -> i) and is
    symmetric in the two players.
    """
    return math.exp(-(lam_i + lam_j) * reward_distance(r_i, r_j, p.cb))


def fehr_schmidt_utility(x_i: float, x_j: float, k: FehrSchmidtParams) -> float:
    """Reference inequity-averse utility of player i given payoffs (x_i, x_j).

    Implemented exactly as U = x_i - k1*max(x_j - x_i, 0) - k2*max(x_i - x_j, 0).
    This function is a standalone reference; the simulation dynamics never
    use it (agents act on accumulated payoff alone).
    """
    return x_i - k.k1 * max(x_j - x_i, 0.0) - k.k2 * max(x_i - x_j, 0.0)
