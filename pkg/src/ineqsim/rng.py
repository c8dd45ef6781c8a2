"""Random stream plumbing and the draw-order contract.

One run consumes one pseudo-random stream (numpy PCG64). Only two
primitives are ever drawn from it:

    u() = Generator.random()             uniform on [0, 1)
    z() = Generator.standard_normal()    standard normal

Integer draws are derived from u(), never drawn directly:

    randbelow(k) = min(int(u() * k), k - 1)    uniform on {0, ..., k-1}

(the min() guards the measure-zero rounding edge; the scaling bias of
~2^-53 is irrelevant at simulation scale). Reducing everything to u()/z()
makes a run's randomness a flat transcript that a straight-line reference
implementation can replay draw for draw.

Draw-order contract
-------------------
The jit kernels, the scalar operations, and any reference implementation
all consume the stream in exactly this order.

1. Initialization (mixed: agents in index order 0..N-1; lattice: cells in
   row-major flat order):
   a. cooperator placement: pool = [0..N-1]; k = round(frac * N);
      for t in 0..k-1: j = t + randbelow(N - t); swap pool[t], pool[j];
      pool[:k] become cooperators.
   b. sensitivities: for each agent a = 0..N-1 in order:
      lambda_a = lo + (hi - lo) * u().
2. Per generation (rewards are zero at entry):
   a. initiation order: order = [0..N-1]; Fisher-Yates from the top:
      for t = N-1 down to 1: j = randbelow(t + 1); swap order[t], order[j].
   b. for each initiator i in that order:
      i.   candidates (mixed only): pool = [0..N-1] minus i, ascending;
           for t in 0..ns-1: j = t + randbelow(N - 1 - t);
           swap pool[t], pool[j]; candidates = pool[:ns].
           Lattice candidates are the neighbor list (up, down, left,
           right order) and consume no draws.
      ii.  partner choice: with v = units + cb_units * cb (float64) and
           d(c) = |v_i - v_c|, the tied set is every candidate when
           lambda_i == 0, otherwise the candidates whose d is exactly
           minimal (float equality). A tied set of m > 1 members consumes
           one randbelow(m) draw selecting by candidate order; a unique
           best consumes none.
      iii. play: one u(); the game happens iff u < exp(-(lambda_i +
           lambda_j) * d(j)); payoffs apply immediately.
   c. reproduction (runs every generation, including the last), one
      offspring per slot s = 0..N-1 (mixed) or per cell in row-major
      order (lattice), reading only the pre-reproduction population:
      i.   parents: a = randbelow(P); b = randbelow(P - 1); if b >= a:
           b += 1. Mixed: P = N over agent indices. Lattice: P = pool
           size over [neighbors..., self] with self last and present
           only when reproduction_includes_self.
      ii.  winner: strictly greater v wins; exact tie consumes one u(),
           and the first pick wins iff u < 0.5.
      iii. type mutation: one u(); if u < mu, one more u(); the offspring
           is a cooperator iff that second u < 0.5.
      iv.  sensitivity mutation: one u(); if u < mu, one z();
           lambda = clamp(lambda + z, 0, 5).
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    """The stream for a run: PCG64 seeded through numpy's SeedSequence."""
    return np.random.default_rng(int(seed))


def derive_run_seed(master_seed: int, cell_index: int, run_index: int) -> int:
    """Seed for one run of a sweep, mixed deterministically from its key.

    The mix is numpy's SeedSequence entropy pool over the triple
    (master_seed, cell_index, run_index); the first 64-bit word becomes
    the run's seed. Distinct keys give independent streams.
    """
    ss = np.random.SeedSequence([int(master_seed), int(cell_index), int(run_index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def randbelow(rng, k: int) -> int:
    """Uniform integer on {0, ..., k-1} derived from one u() draw."""
    j = int(rng.random() * k)
    return k - 1 if j >= k else j
