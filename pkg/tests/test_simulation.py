"""Tests for quantization, tallies, the idealized decoder and the Monte Carlo loop."""

import numpy as np
import pytest

from gmdthresh.config import SIM_BLOCK_TRIALS
from gmdthresh.error_prob import (
    IntervalTally,
    errors_only_error_prob,
    exact_error_prob_1t,
    exact_error_prob_zt,
)
from gmdthresh.gauss import Channel
from gmdthresh.multi_threshold import ThresholdSet
from gmdthresh.simulation import (
    QuantizedSymbol,
    SimEstimate,
    block_generator,
    bmd_success,
    error_events_from_noise,
    gmd_error_event,
    monte_carlo,
    quantize,
    tally,
)
from gmdthresh.single_threshold import CodeShape

from .test_error_prob import all_tallies, per_threshold_failure, representative_vector


class TestQuantize:
    def test_three_way_rule(self):
        assert quantize(0.5, 0.2) == QuantizedSymbol.ZERO
        assert quantize(-0.5, 0.2) == QuantizedSymbol.ONE
        assert quantize(0.0, 0.2) == QuantizedSymbol.ERASURE

    def test_boundaries_are_erased(self):
        assert quantize(0.2, 0.2) == QuantizedSymbol.ERASURE
        assert quantize(-0.2, 0.2) == QuantizedSymbol.ERASURE

    def test_zero_threshold_erases_only_zero(self):
        assert quantize(0.0, 0.0) == QuantizedSymbol.ERASURE
        assert quantize(1e-12, 0.0) == QuantizedSymbol.ZERO

    def test_rejects_bad_threshold(self):
        with pytest.raises(ValueError):
            quantize(0.5, 1.2)


class TestTally:
    def test_noiseless(self):
        tl = tally(np.ones(7), ThresholdSet.of(0.1, 0.3))
        assert (tl.t_r, tl.t_l, tl.t_c) == (7, 0, 0)
        assert tl.t_lower == (0,) and tl.t_upper == (0,)

    def test_direct_classification(self):
        tl = tally([-0.5, 0.05, 0.2, 0.9], ThresholdSet.of(0.1, 0.3))
        assert tl == IntervalTally(t_l=1, t_c=1, t_r=1, t_lower=(0,), t_upper=(1,))

    def test_boundaries_follow_quantizer(self):
        ts = ThresholdSet.of(0.1, 0.3)
        # |y| = T_1 is still erased by T_1, |y| = T_2 by T_2
        tl = tally([0.1, -0.1, 0.3, -0.3], ts)
        assert tl == IntervalTally(t_l=0, t_c=2, t_r=0, t_lower=(1,), t_upper=(1,))

    @pytest.mark.parametrize("ts", [(0.2,), (0.1, 0.3), (0.05, 0.15, 0.4)])
    def test_matches_per_threshold_quantize(self, ts):
        ts = ThresholdSet(ts)
        rng = np.random.default_rng(11)
        for _ in range(10_000):
            y = 1.0 + 0.6 * rng.standard_normal(8)
            tl = tally(y, ts)
            assert tl.n == 8
            for T, (eps, tau) in zip(ts, tl.per_threshold_counts()):
                q = [quantize(v, T) for v in y]
                assert eps == q.count(QuantizedSymbol.ONE)
                assert tau == q.count(QuantizedSymbol.ERASURE)


class TestDecoder:
    @pytest.mark.parametrize("d", [1, 2, 5, 8, 63])
    def test_capability_boundaries(self, d):
        assert bmd_success(0, d - 1, d)
        assert not bmd_success(0, d, d)
        assert not bmd_success((d + 1) // 2, 0, d)
        assert bmd_success((d - 1) // 2, 0, d)

    def test_noiseless_never_fails(self):
        for d in range(1, 9):
            assert not gmd_error_event(IntervalTally(0, 0, 8, (0, 0), (0, 0)), d)

    def test_single_threshold_reduction(self):
        for t_l in range(5):
            for t_c in range(5):
                tl = IntervalTally(t_l, t_c, 10 - t_l - t_c)
                assert gmd_error_event(tl, 5) == (2 * t_l + t_c >= 5)

    def test_brute_force_all_tallies(self):
        ts, d = ThresholdSet.of(0.1, 0.3), 5
        for tl in all_tallies(8, 2):
            assert gmd_error_event(tl, d) == per_threshold_failure(representative_vector(tl, ts), ts, d)

    def test_batched_events_match_tally_path(self):
        ts, d = ThresholdSet.of(0.1, 0.3), 5
        rng = np.random.default_rng(3)
        y = 1.0 + 0.5 * rng.standard_normal((2000, 10))
        batched = error_events_from_noise(y, ts, d)
        assert batched.tolist() == [gmd_error_event(tally(row, ts), d) for row in y]


class TestSimEstimate:
    def test_fields(self):
        est = SimEstimate(trials=100, error_events=25)
        assert est.p_hat == 0.25
        assert est.std_err == pytest.approx(np.sqrt(0.25 * 0.75 / 100))
        lo, hi = est.confidence_interval(3.0)
        assert lo == pytest.approx(0.25 - 3 * est.std_err)
        assert hi == pytest.approx(0.25 + 3 * est.std_err)

    def test_zero_events(self):
        est = SimEstimate(trials=10, error_events=0)
        assert est.std_err == 0.0
        assert est.confidence_interval() == (0.0, 0.0)


class TestMonteCarlo:
    def test_block_streams_are_keyed(self):
        a = block_generator(5, 0).standard_normal(4)
        b = block_generator(5, 1).standard_normal(4)
        c = block_generator(5, 0).standard_normal(4)
        assert not np.array_equal(a, b)
        assert np.array_equal(a, c)

    def test_reproducible_across_workers(self, ch04, short_code):
        ts = ThresholdSet.of(0.1, 0.3)
        trials = 3 * SIM_BLOCK_TRIALS + 17
        one = monte_carlo(short_code, ch04, ts, trials, seed=99, workers=1)
        again = monte_carlo(short_code, ch04, ts, trials, seed=99, workers=1)
        many = monte_carlo(short_code, ch04, ts, trials, seed=99, workers=4)
        assert one == again == many
        assert one.trials == trials

    def test_prefix_of_longer_run(self, ch04, short_code):
        ts = ThresholdSet.of(0.2)
        short = monte_carlo(short_code, ch04, ts, SIM_BLOCK_TRIALS, seed=1)
        longer = monte_carlo(short_code, ch04, ts, 2 * SIM_BLOCK_TRIALS, seed=1)
        assert short.error_events <= longer.error_events

    def test_small_noise_no_errors(self):
        est = monte_carlo(CodeShape(15, 7), Channel(0.01), ThresholdSet.of(0.2), 100_000, seed=4)
        assert est.p_hat <= 1e-4

    def test_monotone_in_distance(self, ch04):
        ts = ThresholdSet.of(0.2)
        events = [monte_carlo(CodeShape(15, d), ch04, ts, 20_000, seed=8).error_events for d in range(1, 16)]
        assert all(b <= a for a, b in zip(events, events[1:]))

    def test_extra_threshold_never_hurts(self, ch04, short_code):
        base = monte_carlo(short_code, ch04, ThresholdSet.of(0.2), 30_000, seed=21)
        more = monte_carlo(short_code, ch04, ThresholdSet.of(0.2, 0.25), 30_000, seed=21)
        assert more.error_events <= base.error_events

    def test_invalid_arguments(self, ch04, short_code):
        with pytest.raises(ValueError):
            monte_carlo(short_code, ch04, ThresholdSet.of(0.2), 0, seed=1)
        with pytest.raises(ValueError):
            monte_carlo(short_code, ch04, ThresholdSet.of(0.2), 10, seed=-1)


@pytest.mark.slow
class TestAgainstExact:
    """Million-trial agreement with the exact sums, within three standard errors."""

    def test_single_threshold(self, ch04, short_code):
        est = monte_carlo(short_code, ch04, ThresholdSet.of(0.2), 1_000_000, seed=2024, workers=4)
        assert abs(est.p_hat - exact_error_prob_1t(short_code, ch04, 0.2)) <= 3 * est.std_err

    def test_two_thresholds(self, ch04):
        code, ts = CodeShape(10, 5), ThresholdSet.of(0.1, 0.3)
        est = monte_carlo(code, ch04, ts, 1_000_000, seed=2025, workers=4)
        assert abs(est.p_hat - exact_error_prob_zt(code, ch04, ts)) <= 3 * est.std_err

    def test_errors_only(self, ch04, short_code):
        est = monte_carlo(short_code, ch04, ThresholdSet.of(0.0), 1_000_000, seed=2026, workers=4)
        assert abs(est.p_hat - errors_only_error_prob(short_code, ch04)) <= 3 * est.std_err
