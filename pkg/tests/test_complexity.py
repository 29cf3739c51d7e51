"""Monte Carlo estimate of the mutually profitable offer count."""

import numpy as np
import pytest

from chiptrade import config_for_variant
from chiptrade.analytics import expected_rational_trades, trade_counts_by_variant


class TestEstimator:
    def test_two_color_mean_near_reference(self):
        est = expected_rational_trades(2, n_samples=3000, seed=1)
        assert est.n_colors == 2
        assert est.mean == pytest.approx(37.1, rel=0.10)
        assert 0 < est.std_error < 1.0

    def test_three_color_mean_near_reference(self):
        est = expected_rational_trades(3, n_samples=3000, seed=2)
        assert est.mean == pytest.approx(120.7, rel=0.10)

    def test_accepts_config_or_color_count(self):
        by_colors = expected_rational_trades(2, n_samples=500, seed=9)
        by_config = expected_rational_trades(
            config_for_variant(2), n_samples=500, seed=9
        )
        assert by_colors.mean == by_config.mean

    def test_deterministic_per_seed(self):
        a = expected_rational_trades(2, n_samples=1000, seed=4)
        b = expected_rational_trades(2, n_samples=1000, seed=4)
        assert a.mean == b.mean and a.std_error == b.std_error

    def test_batch_size_does_not_change_the_estimate(self):
        a = expected_rational_trades(2, n_samples=1000, seed=4, batch_size=64)
        b = expected_rational_trades(2, n_samples=1000, seed=4, batch_size=1000)
        assert a.mean == pytest.approx(b.mean, abs=1e-12)

    def test_prior_acceptance_counts_more_offers(self):
        sampled = expected_rational_trades(2, n_samples=1500, seed=5)
        prior = expected_rational_trades(
            2, n_samples=1500, seed=5, acceptance="prior"
        )
        assert prior.mean > sampled.mean + 10

    def test_continuous_sampling_agrees_with_grid(self):
        grid = expected_rational_trades(3, n_samples=2500, seed=6)
        smooth = expected_rational_trades(
            3, n_samples=2500, seed=6, sampling="continuous"
        )
        assert smooth.mean == pytest.approx(grid.mean, rel=0.05)

    def test_counts_are_nonnegative_and_bounded(self):
        # 2 colors allow at most 200 ordered offers per proposer
        est = expected_rational_trades(2, n_samples=300, seed=7)
        assert 0 < est.mean < 200

    def test_invalid_modes_rejected(self):
        with pytest.raises(ValueError, match="acceptance"):
            expected_rational_trades(2, n_samples=10, acceptance="vibes")
        with pytest.raises(ValueError, match="sampling"):
            expected_rational_trades(2, n_samples=10, sampling="psychic")
        with pytest.raises(ValueError, match="samples"):
            expected_rational_trades(2, n_samples=1)

    def test_variant_sweep(self):
        sweep = trade_counts_by_variant((2, 3), n_samples=400, seed=8)
        assert set(sweep) == {2, 3}
        assert sweep[3].mean > sweep[2].mean
