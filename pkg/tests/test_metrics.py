import numpy as np
import pytest

from ineqsim.lattice import LatticeGrid
from ineqsim.metrics import (
    coop_components,
    fraction_cooperators,
    largest_coop_cluster,
    mean_lambda_cooperators,
    payoff_classes,
    within_cluster_fraction,
)
from ineqsim.wellmixed import Population


def pop(strategies, lams=None, units=None, cb_units=None):
    n = len(strategies)
    return Population(
        strategies=np.array(strategies, dtype=np.int8),
        lams=np.array(lams if lams is not None else [1.0] * n),
        units=np.array(units if units is not None else [0] * n, dtype=np.int64),
        cb_units=np.array(cb_units if cb_units is not None else [0] * n, dtype=np.int64),
    )


def closure_components(strat2d: np.ndarray, torus: bool) -> set[frozenset]:
    """Brute-force oracle: components via transitive closure of adjacency."""
    rows, cols = strat2d.shape
    n = rows * cols
    coop = strat2d.ravel() == 1
    adj = np.eye(n, dtype=bool)
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if not coop[i]:
                continue
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                rr, cc = r + dr, c + dc
                if torus:
                    rr %= rows
                    cc %= cols
                elif not (0 <= rr < rows and 0 <= cc < cols):
                    continue
                j = rr * cols + cc
                if coop[j]:
                    adj[i, j] = True
    reach = adj
    for _ in range(int(np.ceil(np.log2(max(n, 2))))):
        reach = reach @ reach
    comps = set()
    for i in range(n):
        if coop[i]:
            comps.add(frozenset(np.flatnonzero(reach[i] & coop).tolist()))
    return comps


def labels_to_components(labels: np.ndarray) -> set[frozenset]:
    flat = labels.ravel()
    return {
        frozenset(np.flatnonzero(flat == k).tolist())
        for k in range(flat.max() + 1)
    } if (flat >= 0).any() else set()


class TestScalarMetrics:
    def test_fraction_extremes(self):
        assert fraction_cooperators(pop([0] * 6)) == 0.0
        assert fraction_cooperators(pop([1] * 6)) == 1.0

    def test_fraction_share(self):
        assert fraction_cooperators(pop([1] * 25 + [0] * 225)) == 0.1

    def test_mean_lambda_missing_without_cooperators(self):
        assert mean_lambda_cooperators(pop([0, 0], lams=[1.0, 2.0])) is None

    def test_mean_lambda_over_cooperators_only(self):
        p = pop([1, 1, 0], lams=[1.0, 3.0, 5.0])
        assert mean_lambda_cooperators(p) == pytest.approx(2.0)

    def test_mean_lambda_uniform(self):
        assert mean_lambda_cooperators(pop([1] * 4, lams=[4.2] * 4)) == pytest.approx(4.2)

    def test_payoff_classes(self):
        assert payoff_classes(pop([0, 0, 0])) == 1
        p = pop([0, 0, 0], units=[0, 0, 1], cb_units=[0, 0, 1])
        assert payoff_classes(p) == 2
        p = pop([0] * 4, units=[0, 1, 2, 3])
        assert payoff_classes(p) == 4

    def test_payoff_classes_pairs_not_values(self):
        # (1,0) and (0,1) are distinct classes even if cb made values equal
        p = pop([0, 0], units=[1, 0], cb_units=[0, 1])
        assert payoff_classes(p) == 2


class TestCoopComponents:
    def test_full_grid_single_component(self):
        labels = coop_components(np.ones((3, 3), dtype=np.int8), torus=True)
        assert labels_to_components(labels) == {frozenset(range(9))}
        assert largest_coop_cluster(np.ones((3, 3), dtype=np.int8), torus=True) == 9

    def test_torus_checkerboard_is_all_singletons(self):
        strat = np.indices((4, 4)).sum(axis=0) % 2
        labels = coop_components(strat.astype(np.int8), torus=True)
        comps = labels_to_components(labels)
        assert len(comps) == 8 and all(len(c) == 1 for c in comps)

    def test_wrapped_row_is_one_component(self):
        strat = np.zeros((5, 7), dtype=np.int8)
        strat[2, :] = 1
        assert largest_coop_cluster(strat, torus=True) == 7

    def test_no_cooperators(self):
        assert largest_coop_cluster(np.zeros((4, 4), dtype=np.int8), torus=True) == 0

    def test_two_blocks(self):
        strat = np.zeros((6, 6), dtype=np.int8)
        strat[0:2, 0:2] = 1
        strat[4:6, 3:5] = 1
        assert largest_coop_cluster(strat, torus=False) == 4

    def test_partition_covers_exactly_the_cooperators(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            strat = (rng.random((5, 6)) < 0.5).astype(np.int8)
            for torus in (True, False):
                labels = coop_components(strat, torus=torus)
                assert np.array_equal(labels >= 0, strat == 1)
                sizes = [len(c) for c in labels_to_components(labels)]
                assert sum(sizes) == int(strat.sum())

    def test_matches_transitive_closure_sampled(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            strat = (rng.random((4, 4)) < rng.random()).astype(np.int8)
            for torus in (True, False):
                labels = coop_components(strat, torus=torus)
                assert labels_to_components(labels) == closure_components(strat, torus)

    def test_grid_object_supplies_its_torus_flag(self):
        strat = np.zeros((3, 4), dtype=np.int8)
        strat[0, 0] = strat[0, 3] = 1
        grid = LatticeGrid(
            rows=3, cols=4,
            strategies=strat.ravel().copy(),
            lams=np.ones(12), units=np.zeros(12, dtype=np.int64),
            cb_units=np.zeros(12, dtype=np.int64), torus=True,
        )
        assert largest_coop_cluster(grid) == 2  # wraps around the row
        grid.torus = False
        assert largest_coop_cluster(grid) == 1


class TestWithinClusterFraction:
    def labels(self, strat):
        return coop_components(np.array(strat, dtype=np.int8), torus=False)

    def test_all_games_within(self):
        labels = self.labels([[1, 1], [1, 1]])
        games = [((0, 0), (0, 1), (1, 1)), ((1, 0), (1, 1), (1, 1))]
        assert within_cluster_fraction(games, labels) == 1.0

    def test_no_games_is_missing(self):
        assert within_cluster_fraction([], self.labels([[1, 0], [0, 1]])) is None

    def test_partial_count(self):
        labels = self.labels([[1, 1, 0], [0, 0, 0], [0, 1, 1]])
        games = [
            ((0, 0), (0, 1), (1, 1)),  # within the top component
            ((0, 1), (0, 2), (1, 0)),  # C-D game, outside
            ((0, 0), (2, 1), (1, 1)),  # both C but different components
        ]
        assert within_cluster_fraction(games, labels) == pytest.approx(1 / 3)

    def test_bounded_by_cc_share(self):
        labels = self.labels([[1, 1], [0, 0]])
        games = [
            ((0, 0), (0, 1), (1, 1)),
            ((1, 0), (1, 1), (0, 0)),
            ((0, 0), (1, 0), (1, 0)),
        ]
        frac = within_cluster_fraction(games, labels)
        cc_share = 1 / 3
        assert frac <= cc_share
