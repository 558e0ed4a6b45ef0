"""Trial streams, the chunked deterministic driver, and Wilson intervals."""
import math
import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gkpaqec import c4c6, montecarlo
from gkpaqec.gkp import sigma_to_db
from gkpaqec.montecarlo import (
    Estimate,
    TrialPlan,
    _StreamBank,
    _default_trials,
    _worker_count,
    derive_stream,
    run_plan,
    wilson_interval,
)


class TestDeriveStream:
    def test_reproducible(self):
        a = derive_stream(9, 1234).standard_normal(8)
        b = derive_stream(9, 1234).standard_normal(8)
        assert np.array_equal(a, b)

    def test_distinct_trials_diverge(self):
        a = derive_stream(9, 0).standard_normal(8)
        b = derive_stream(9, 1).standard_normal(8)
        assert not np.array_equal(a, b)

    def test_distinct_seeds_diverge(self):
        a = derive_stream(0, 7).standard_normal(8)
        b = derive_stream(1, 7).standard_normal(8)
        assert not np.array_equal(a, b)

    def test_large_trial_index(self):
        g = derive_stream(3, 2**40 + 17)
        assert np.isfinite(g.standard_normal(4)).all()


def _mixed_draws(gen, sigma=0.5):
    return (
        gen.normal(0.0, sigma, 3).tolist(),
        int(gen.integers(0, 2)),
        gen.normal(0.0, sigma, 4).tolist(),
        int(gen.integers(0, 2)),
    )


class TestStreamBank:
    @pytest.mark.parametrize("index", [0, 1, 5, 12345])
    def test_reset_equals_fresh_stream(self, index):
        bank = _StreamBank(42)
        assert _mixed_draws(bank.reset(index)) == _mixed_draws(derive_stream(42, index))

    def test_reset_discards_partial_consumption(self):
        bank = _StreamBank(7)
        gen = bank.reset(3)
        gen.normal(0.0, 1.0, 5)
        gen.integers(0, 2)
        # resetting to another trial and back must reproduce the full sequence
        bank.reset(8).normal(0.0, 1.0, 2)
        assert _mixed_draws(bank.reset(3)) == _mixed_draws(derive_stream(7, 3))


class TestWilsonInterval:
    def test_zero_failures_stays_informative(self):
        lo, hi = wilson_interval(0, 1000)
        assert lo == 0.0
        assert hi == pytest.approx(0.0038269, abs=1e-7)

    def test_all_failures_mirrors_zero(self):
        lo0, hi0 = wilson_interval(0, 1000)
        lo1, hi1 = wilson_interval(1000, 1000)
        assert hi1 == 1.0
        assert lo1 == pytest.approx(1.0 - hi0, abs=1e-15)

    @given(st.integers(1, 10**6), st.data())
    def test_matches_score_formula(self, n, data):
        k = data.draw(st.integers(0, n))
        lo, hi = wilson_interval(k, n)
        z = 1.96
        center = (k + z * z / 2) / (n + z * z)
        half = z * math.sqrt(k * (n - k) / n + z * z / 4) / (n + z * z)
        assert lo == pytest.approx(max(0.0, center - half), abs=1e-15)
        assert hi == pytest.approx(min(1.0, center + half), abs=1e-15)
        assert 0.0 <= lo <= k / n <= hi <= 1.0

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            wilson_interval(-1, 10)
        with pytest.raises(ValueError):
            wilson_interval(11, 10)
        with pytest.raises(ValueError):
            wilson_interval(0, 0)

    def test_coverage_at_nominal_level(self):
        # 95% interval: empirical coverage over 1000 binomial draws
        rng = np.random.default_rng(2024)
        hits = 0
        for _ in range(1000):
            k = int(rng.binomial(1000, 0.1))
            lo, hi = wilson_interval(k, 1000)
            hits += lo <= 0.1 <= hi
        assert hits >= 930


class TestTrialPlanValidation:
    def test_accepts_minimal_plans(self):
        TrialPlan(experiment="bitflip", decoder="both", sigmas=(0.5,))
        TrialPlan(experiment="c4c6", decoder="analog", sigmas=(0.5,), levels=(1, 3))

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(experiment="surface", decoder="both", sigmas=(0.5,)),
            dict(experiment="bitflip", decoder="soft", sigmas=(0.5,)),
            dict(experiment="bitflip", decoder="both", sigmas=()),
            dict(experiment="bitflip", decoder="both", sigmas=(0.0,)),
            dict(experiment="bitflip", decoder="both", sigmas=(0.5, math.inf)),
            dict(experiment="bitflip", decoder="both", sigmas=(0.5, 0.4)),
            dict(experiment="bitflip", decoder="both", sigmas=(0.5, 0.5)),
            dict(experiment="c4c6", decoder="both", sigmas=(0.5,)),
            dict(experiment="c4c6", decoder="both", sigmas=(0.5,), levels=(0,)),
            dict(experiment="c4c6", decoder="both", sigmas=(0.5,), levels=(6,)),
            dict(experiment="c4c6", decoder="both", sigmas=(0.5,), levels=(1, 1)),
            dict(experiment="bitflip", decoder="both", sigmas=(0.5,), levels=(1,)),
            dict(experiment="bitflip", decoder="both", sigmas=(0.5,), trials=0),
            dict(experiment="bitflip", decoder="both", sigmas=(0.5,), master_seed=-1),
            dict(experiment="bitflip", decoder="both", sigmas=(0.5,), master_seed=2**64),
        ],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            TrialPlan(**kwargs)

    def test_default_trials(self):
        assert _default_trials("bitflip", 1) == 10**6
        assert _default_trials("c4c6", 3) == 10**5
        assert _default_trials("c4c6", 4) == 10**4


class TestWorkerCount:
    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("GKPAQEC_THREADS", "3")
        assert _worker_count() == 3

    def test_env_rejects_garbage(self, monkeypatch):
        for bad in ("x", "0", "-2"):
            monkeypatch.setenv("GKPAQEC_THREADS", bad)
            with pytest.raises(ValueError):
                _worker_count()

    def test_default_cap(self, monkeypatch):
        monkeypatch.delenv("GKPAQEC_THREADS", raising=False)
        assert 1 <= _worker_count() <= 8


def _bitflip_plan(trials, sigmas=(0.4,), seed=0, decoder="both"):
    return TrialPlan(
        experiment="bitflip", decoder=decoder, sigmas=sigmas, trials=trials, master_seed=seed
    )


class TestRunPlanBitflip:
    def test_row_shape_and_field_consistency(self):
        rows = run_plan(_bitflip_plan(2000, sigmas=(0.3, 0.4), seed=6))
        assert [(r.sigma, r.decoder) for r in rows] == [
            (0.3, "analog"),
            (0.3, "digital"),
            (0.4, "analog"),
            (0.4, "digital"),
        ]
        for r in rows:
            assert r.experiment == "bitflip"
            assert (r.level, r.basis_mode, r.seed) == (1, "q", 6)
            assert r.trials == 2000
            assert r.p_fail == r.failures / r.trials
            assert r.squeezing_db == sigma_to_db(r.sigma)
            assert r.ci_low <= r.p_fail <= r.ci_high
            assert r.error is None

    def test_paired_decoders_share_noise(self):
        # same trial streams for both decoders: the better decoder must show
        # strictly fewer failures, not merely a lower estimate
        rows = run_plan(_bitflip_plan(100_000, seed=0))
        by_dec = {r.decoder: r for r in rows}
        assert 0 < by_dec["analog"].failures < by_dec["digital"].failures

    def test_deterministic_across_worker_counts(self, monkeypatch):
        results = []
        for workers in ("1", "5"):
            monkeypatch.setenv("GKPAQEC_THREADS", workers)
            results.append(run_plan(_bitflip_plan(10_000, seed=12)))
        assert results[0] == results[1]

    def test_trials_beyond_one_chunk(self):
        rows = run_plan(_bitflip_plan(montecarlo._BITFLIP_CHUNK + 1, seed=1))
        assert all(r.trials == montecarlo._BITFLIP_CHUNK + 1 for r in rows)
        assert rows == run_plan(_bitflip_plan(montecarlo._BITFLIP_CHUNK + 1, seed=1))


class TestRunPlanC4c6:
    def test_deterministic_across_worker_counts(self, monkeypatch):
        plan = TrialPlan(
            experiment="c4c6", decoder="both", sigmas=(0.5,), levels=(1, 2),
            trials=3000, master_seed=4,
        )
        results = []
        for workers in ("1", "5"):
            monkeypatch.setenv("GKPAQEC_THREADS", workers)
            results.append(run_plan(plan))
        assert results[0] == results[1]

    def test_failing_cell_is_isolated(self, monkeypatch):
        real = c4c6._decode_batch

        def sabotaged(dev, sigma, mode):
            if dev.shape[1] == 12:
                raise RuntimeError("level-2 kernel down")
            return real(dev, sigma, mode)

        monkeypatch.setattr(c4c6, "_decode_batch", sabotaged)
        plan = TrialPlan(
            experiment="c4c6", decoder="both", sigmas=(0.5,), levels=(1, 2),
            trials=500, master_seed=3,
        )
        rows = run_plan(plan)
        assert len(rows) == 8
        good = [r for r in rows if r.level == 1]
        bad = [r for r in rows if r.level == 2]
        assert all(r.error is None for r in good)
        for r in bad:
            assert r.error is not None and "level-2 kernel down" in r.error
            assert math.isnan(r.p_fail) and r.trials == 0

    def test_estimates_round_trip_by_value(self):
        plan = TrialPlan(
            experiment="c4c6", decoder="analog", sigmas=(0.5,), levels=(1,),
            trials=400, master_seed=9,
        )
        a, b = run_plan(plan), run_plan(plan)
        assert a == b
        assert all(isinstance(r, Estimate) for r in a)
