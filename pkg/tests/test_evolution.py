import numpy as np
import pytest

from ineqsim.config import SimConfig
from ineqsim.core import AgentState, Reward, Strategy
from ineqsim.evolution import MutationParams, binary_tournament_mixed, mutate, reproduce_mixed
from ineqsim.rng import make_rng
from ineqsim.wellmixed import Population


def pop_from_values(values, cb_units=None, strategies=None, lams=None):
    n = len(values)
    return Population(
        strategies=np.array(strategies if strategies is not None else [0] * n, dtype=np.int8),
        lams=np.array(lams if lams is not None else [1.0] * n, dtype=np.float64),
        units=np.array(values, dtype=np.int64),
        cb_units=np.array(cb_units if cb_units is not None else [0] * n, dtype=np.int64),
    )


class TestBinaryTournament:
    def test_distribution_on_three_rewards(self):
        # rewards {5,1,0}: agent 0 wins both pairs containing it -> 2/3
        pop = pop_from_values([5, 1, 0])
        rng = make_rng(1)
        reps = 10**5
        wins = sum(binary_tournament_mixed(pop, rng, 0.45) == 0 for _ in range(reps))
        assert abs(wins / reps - 2 / 3) < 0.01

    def test_all_tied_uniform_over_drawn(self):
        pop = pop_from_values([3, 3, 3, 3])
        rng = make_rng(2)
        counts = np.zeros(4)
        reps = 40000
        for _ in range(reps):
            counts[binary_tournament_mixed(pop, rng, 0.45)] += 1
        assert np.all(np.abs(counts / reps - 0.25) < 0.01)

    def test_two_agents_forced(self):
        pop = pop_from_values([0, 4])
        rng = make_rng(3)
        assert all(binary_tournament_mixed(pop, rng, 0.45) == 1 for _ in range(50))

    def test_depends_only_on_reward_ordering(self):
        # a strictly increasing transform of the values leaves the parent
        # sequence unchanged (same tie structure, same seed)
        a = pop_from_values([0, 1, 2, 2, 7])
        b = pop_from_values([0, 10, 20, 20, 70])
        seq_a = [binary_tournament_mixed(a, make_rng(s), 0.45) for s in range(200)]
        seq_b = [binary_tournament_mixed(b, make_rng(s), 0.45) for s in range(200)]
        assert seq_a == seq_b

    def test_weak_dominance_of_max(self):
        rng = make_rng(4)
        pop = pop_from_values([9, 4, 4, 1, 0])
        reps = 30000
        counts = np.zeros(5)
        for _ in range(reps):
            counts[binary_tournament_mixed(pop, rng, 0.45)] += 1
        assert counts[0] == counts.max()


class TestMutate:
    def test_mu_zero_is_identity(self):
        a = AgentState(Strategy.COOPERATOR, 2.5, Reward(3, 1))
        assert mutate(a, MutationParams(0.0), make_rng(0)) == a

    def test_type_reset_is_uniform(self):
        rng = make_rng(1)
        m = MutationParams(1.0)
        a = AgentState(Strategy.COOPERATOR, 2.5)
        reps = 10**5
        still = sum(
            mutate(a, m, rng).strategy is Strategy.COOPERATOR for _ in range(reps)
        )
        assert abs(still / reps - 0.5) < 0.005

    def test_lambda_stays_in_bounds(self):
        rng = make_rng(2)
        m = MutationParams(1.0)
        for lam0 in (0.0, 0.01, 2.5, 4.99, 5.0):
            a = AgentState(Strategy.DEFECTOR, lam0)
            for _ in range(2000):
                lam = mutate(a, m, rng).lam
                assert 0.0 <= lam <= 5.0

    def test_independent_events(self):
        # with mu=0.5 the four (type-event, lambda-event) combinations all occur
        rng = make_rng(3)
        m = MutationParams(0.5)
        a = AgentState(Strategy.COOPERATOR, 2.5)
        type_changed = lam_changed = both = 0
        reps = 20000
        for _ in range(reps):
            out = mutate(a, m, rng)
            t = out.strategy is not a.strategy
            l = out.lam != a.lam
            type_changed += t
            lam_changed += l
            both += t and l
        # type flips at mu/2, lambda changes at mu (normal draw is never 0)
        assert abs(type_changed / reps - 0.25) < 0.02
        assert abs(lam_changed / reps - 0.5) < 0.02
        assert abs(both / reps - 0.125) < 0.02


class TestReproduceMixed:
    def cfg(self, **kw):
        base = dict(model="mixed", n=10, ns=3, cb=0.45, gmax=1)
        base.update(kw)
        return SimConfig(**base)

    def test_size_preserved_rewards_zero(self):
        pop = pop_from_values([5, 0, 0, 0, 0, 0, 0, 0, 0, 0])
        new = reproduce_mixed(pop, self.cfg(), make_rng(1))
        assert new.n == 10
        assert not new.units.any() and not new.cb_units.any()

    def test_clones_identical_population(self):
        pop = pop_from_values([2] * 8, strategies=[1] * 8, lams=[3.3] * 8)
        new = reproduce_mixed(pop, self.cfg(n=8, mu=0.0), make_rng(2))
        assert np.array_equal(new.strategies, pop.strategies)
        assert np.array_equal(new.lams, pop.lams)

    def test_unique_max_expected_share(self):
        # the unique max wins a tournament with probability 2/N per draw
        n = 10
        strategies = [1] + [0] * (n - 1)
        pop = pop_from_values([9] + [0] * (n - 1), strategies=strategies)
        rng = make_rng(3)
        reps = 20000
        total = 0
        for _ in range(reps):
            total += int(reproduce_mixed(pop, self.cfg(n=n, mu=0.0), rng).strategies.sum())
        share = total / (reps * n)
        assert abs(share - 2 / n) < 0.01

    def test_irreducible_with_mutation(self):
        # from all defectors: P(next generation has a cooperator) is
        # exactly 1 - (1 - mu/2)^N
        n, mu = 5, 0.5
        pop = pop_from_values([0] * n)
        rng = make_rng(4)
        reps = 20000
        hit = sum(
            bool(reproduce_mixed(pop, self.cfg(n=n, mu=mu), rng).strategies.any())
            for _ in range(reps)
        )
        exact = 1 - (1 - mu / 2) ** n
        sigma = (exact * (1 - exact) / reps) ** 0.5
        assert abs(hit / reps - exact) < 4 * sigma
