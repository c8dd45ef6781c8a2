import math

import numpy as np
import pytest

from ineqsim.config import SweepSpec, parse_config
from ineqsim.experiment import (
    SWEEP_HEADER,
    TIMESERIES_HEADER,
    aggregate,
    expand_sweep,
    fmt_float,
    run_experiment,
)
from ineqsim.metrics import GenerationRecord, InteractionTally


def sweep(**kw):
    base = dict(
        model="mixed", n=(10,), ns=(3,), cb=(0.45,), mu=(0.1,),
        runs_per_cell=2, gmax=12, master_seed=42,
    )
    base.update(kw)
    return SweepSpec(**base)


def rec(g, f_c, lam=None):
    return GenerationRecord(
        generation=g, f_c=f_c, mean_lambda_coop=lam, mean_lambda_all=2.0,
        tally=InteractionTally(), payoff_classes=1,
    )


class TestExpandSweep:
    def test_single_cell_single_run(self):
        got = expand_sweep(sweep(runs_per_cell=1))
        assert len(got) == 1
        assert got[0].cell_index == 0 and got[0].run_index == 0

    def test_cross_product_count(self):
        spec = sweep(n=(20,), cb=(0.3, 0.45), ns=(6, 8, 10, 12), runs_per_cell=20)
        got = expand_sweep(spec)
        assert len(got) == 2 * 4 * 20

    def test_deterministic_including_seeds(self):
        spec = sweep(cb=(0.45, 0.3), ns=(8, 6), runs_per_cell=3)
        assert expand_sweep(spec) == expand_sweep(spec)

    def test_canonical_order_ignores_list_order(self):
        a = expand_sweep(sweep(cb=(0.45, 0.3), ns=(8, 6)))
        b = expand_sweep(sweep(cb=(0.3, 0.45), ns=(6, 8)))
        assert a == b
        tuples = [(e.cfg.n, e.cfg.ns, e.cfg.cb, e.cfg.mu, e.run_index) for e in a]
        assert tuples == sorted(tuples)

    def test_invalid_spec_rejected(self):
        from ineqsim.config import ConfigError

        with pytest.raises(ConfigError):
            expand_sweep(sweep(ns=(10,)))  # ns >= n


class TestAggregate:
    def test_constant_series(self):
        records = [rec(g, 0.8) for g in range(10)]
        mean, std, lam = aggregate(records, burn_in=3)
        assert mean == pytest.approx(0.8)
        assert std == pytest.approx(0.0, abs=1e-12)
        assert lam is None

    def test_alternating_series(self):
        records = [rec(g, g % 2) for g in range(10)]
        mean, _, _ = aggregate(records, burn_in=2)
        assert mean == pytest.approx(0.5)

    def test_hand_window(self):
        records = [rec(0, 0.7), rec(1, 0.2), rec(2, 0.4), rec(3, 0.9)]
        mean, std, _ = aggregate(records, burn_in=1)
        assert mean == pytest.approx(0.5)
        assert std == pytest.approx(math.sqrt((0.09 + 0.01 + 0.16) / 3), abs=1e-6)

    def test_lambda_ignores_missing(self):
        records = [rec(0, 1.0, lam=2.0), rec(1, 1.0, lam=None), rec(2, 1.0, lam=4.0)]
        _, _, lam = aggregate(records, burn_in=0)
        assert lam == pytest.approx(3.0)

    def test_empty_window_raises(self):
        with pytest.raises(ValueError, match="window"):
            aggregate([rec(0, 1.0)], burn_in=1)


class TestFmtFloat:
    def test_six_significant_digits(self):
        assert fmt_float(0.12345678) == "0.123457"
        assert fmt_float(0.45) == "0.45"
        assert fmt_float(1.0) == "1"

    def test_missing_values_empty(self):
        assert fmt_float(None) == ""
        assert fmt_float(float("nan")) == ""


class TestRunExperiment:
    def test_artifacts_and_headers(self, tmp_path):
        spec = sweep(cb=(0.3, 0.45), runs_per_cell=2, gmax=9)
        rows = run_experiment(spec, tmp_path, parallelism=1, progress=False)
        assert len(rows) == 2
        sweep_text = (tmp_path / "sweep.csv").read_text()
        assert sweep_text.splitlines()[0] == SWEEP_HEADER
        assert len(sweep_text.splitlines()) == 3
        run_files = sorted(p.name for p in tmp_path.glob("run_*.csv"))
        assert run_files == [
            "run_0000_000.csv", "run_0000_001.csv",
            "run_0001_000.csv", "run_0001_001.csv",
        ]
        first = (tmp_path / "run_0000_000.csv").read_text().splitlines()
        assert first[0] == TIMESERIES_HEADER
        assert len(first) == 10

    def test_all_cooperators_cell(self, tmp_path):
        spec = sweep(mu=(0.0,), runs_per_cell=2, gmax=3, burn_in_frac=0.0)
        spec = SweepSpec(**{**spec.__dict__, "init_coop_frac": 1.0})
        rows = run_experiment(spec, tmp_path, progress=False)
        assert rows[0].mean_f_c == 1.0 and rows[0].std_f_c == 0.0

    def test_parallelism_does_not_change_bytes(self, tmp_path):
        spec = sweep(cb=(0.3, 0.45), ns=(2, 3), runs_per_cell=2, gmax=8)
        d1, d2 = tmp_path / "p1", tmp_path / "p2"
        run_experiment(spec, d1, parallelism=1, progress=False)
        run_experiment(spec, d2, parallelism=4, progress=False)
        files1 = sorted(p.name for p in d1.iterdir())
        files2 = sorted(p.name for p in d2.iterdir())
        assert files1 == files2
        for name in files1:
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes(), name

    def test_lattice_sweep_row_fields(self, tmp_path):
        spec = SweepSpec(
            model="lattice", rows=(4, 6), cols=(4, 6), cb=(0.3,),
            runs_per_cell=1, gmax=6, master_seed=1,
        )
        rows = run_experiment(spec, tmp_path, progress=False)
        text = (tmp_path / "sweep.csv").read_text().splitlines()
        assert len(rows) == 2
        # lattice rows leave n and ns empty, fill rows/cols
        assert text[1].startswith("lattice,,4,4,,0.3,")
        assert text[2].startswith("lattice,,6,6,,0.3,")

    def test_mean_lambda_column_empty_when_never_defined(self, tmp_path):
        spec = sweep(mu=(0.0,), runs_per_cell=1, gmax=4, burn_in_frac=0.0)
        spec = SweepSpec(**{**spec.__dict__, "init_coop_frac": 0.0})
        rows = run_experiment(spec, tmp_path, progress=False)
        assert rows[0].mean_lambda_coop is None
        line = (tmp_path / "sweep.csv").read_text().splitlines()[1]
        assert line.endswith(",")


class TestSweepSpecParsing:
    def test_full_document(self):
        spec = parse_config(
            """
            model: mixed
            n: [100, 150]
            ns: [6, 8]
            cb: [0.3, 0.4]
            mu: [0.1]
            runs_per_cell: 2
            gmax: 10
            master_seed: 9
            """
        )
        assert isinstance(spec, SweepSpec)
        assert len(expand_sweep(spec)) == 2 * 2 * 2 * 2
