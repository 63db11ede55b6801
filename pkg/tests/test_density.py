"""Tests for bandwidth selection and initial-state resampling."""

import numpy as np
import pytest

from chaosboot.density import (
    BandwidthRule,
    bandwidth_for,
    sample_initial,
    sample_initial_batch,
    ucv_bandwidth,
)
from chaosboot.errors import DegenerateDataError, ParameterError, RetryCapError


class TestBandwidthRule:
    def test_defaults(self):
        rule = BandwidthRule()
        assert rule.base == "ucv"
        assert rule.divisor == 4.0

    def test_unknown_base(self):
        with pytest.raises(ParameterError):
            BandwidthRule(base="plugin")

    def test_negative_fixed(self):
        with pytest.raises(ParameterError):
            BandwidthRule(base="fixed", value=-0.1)

    def test_bad_divisor(self):
        with pytest.raises(ParameterError):
            BandwidthRule(divisor=0.0)


class TestUcvBandwidth:
    def test_gaussian_sample_ballpark(self):
        # cross-validation should land within a factor ~3 of the
        # normal-reference rule 1.06 sigma n^{-1/5} on Gaussian data
        rng = np.random.default_rng(0)
        x = rng.normal(0.5, 0.1, 200)
        b = ucv_bandwidth(x)
        ref = 1.06 * x.std(ddof=1) * len(x) ** (-0.2)
        assert ref / 3.0 < b < ref * 3.0

    def test_scale_equivariance_on_grid(self):
        # the selection grid scales with the data range, so rescaling the
        # data rescales the chosen bandwidth by the same factor
        rng = np.random.default_rng(1)
        x = rng.uniform(0, 1, 80)
        b1 = ucv_bandwidth(x)
        b2 = ucv_bandwidth(5.0 * x)
        assert b2 == pytest.approx(5.0 * b1, rel=1e-12)

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        x = rng.uniform(0, 1, 50)
        assert ucv_bandwidth(x) == ucv_bandwidth(x)

    def test_needs_three_points(self):
        with pytest.raises(ParameterError):
            ucv_bandwidth([0.1, 0.9])

    def test_degenerate_data(self):
        with pytest.raises(DegenerateDataError):
            ucv_bandwidth([0.4] * 10)


class TestBandwidthFor:
    def test_fixed_passthrough(self):
        rule = BandwidthRule(base="fixed", value=0.07)
        assert bandwidth_for([0.1, 0.5, 0.9], rule) == 0.07

    def test_divisor_scales_result(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(0, 1, 60)
        b4 = bandwidth_for(x, BandwidthRule(divisor=4.0))
        b8 = bandwidth_for(x, BandwidthRule(divisor=8.0))
        assert b8 == pytest.approx(b4 / 2.0, rel=1e-12)


class TestSampleInitial:
    def test_zero_bandwidth_gives_empirical_atoms(self):
        data = np.array([0.2, 0.5, 0.8])
        rule = BandwidthRule(base="fixed", value=0.0)
        rng = np.random.default_rng(4)
        draws = sample_initial_batch(data, rule, (0.0, 1.0), rng, 300)
        assert set(np.round(draws, 12)) <= {0.2, 0.5, 0.8}
        assert len(set(np.round(draws, 12))) == 3

    def test_single_atom_mean_and_spread(self):
        rule = BandwidthRule(base="fixed", value=0.1)
        rng = np.random.default_rng(5)
        draws = sample_initial_batch([0.5], rule, (0.0, 1.0), rng, 20_000)
        assert draws.mean() == pytest.approx(0.5, abs=0.01)
        assert draws.std() == pytest.approx(0.1, abs=0.01)

    def test_respects_support(self):
        rule = BandwidthRule(base="fixed", value=0.3)
        rng = np.random.default_rng(6)
        draws = sample_initial_batch([0.05, 0.95], rule, (0.0, 1.0), rng, 5000)
        assert np.all((draws >= 0.0) & (draws <= 1.0))

    def test_retry_cap(self):
        # a huge bandwidth against a sliver of support rejects essentially
        # every candidate and must hit the cap rather than spin forever
        rule = BandwidthRule(base="fixed", value=1e9)
        rng = np.random.default_rng(7)
        with pytest.raises(RetryCapError):
            sample_initial_batch([0.5], rule, (0.4999, 0.5001), rng, 100)

    def test_empty_data(self):
        with pytest.raises(DegenerateDataError):
            sample_initial([], BandwidthRule(base="fixed", value=0.1), (0, 1), np.random.default_rng(8))

    def test_degenerate_support(self):
        with pytest.raises(ParameterError):
            sample_initial([0.5], BandwidthRule(base="fixed", value=0.1), (1.0, 1.0), np.random.default_rng(9))

    def test_scalar_matches_batch_of_one(self):
        rule = BandwidthRule(base="fixed", value=0.05)
        data = [0.3, 0.6, 0.9]
        a = sample_initial(data, rule, (0.0, 1.0), np.random.default_rng(10))
        b = sample_initial_batch(data, rule, (0.0, 1.0), np.random.default_rng(10), 1)
        assert a == b[0]

    def test_halved_divisor_doubles_dispersion(self):
        # the smoothing noise added around each atom scales inversely with
        # the divisor; measure it directly around a single atom
        rng_data = np.random.default_rng(11)
        data = rng_data.uniform(0.3, 0.7, 100)
        spread = {}
        for div in (4.0, 8.0):
            rule = BandwidthRule(base="fixed", value=bandwidth_for(data, BandwidthRule(divisor=div)))
            rng = np.random.default_rng(12)
            draws = sample_initial_batch([0.5], rule, (0.0, 1.0), rng, 30_000)
            spread[div] = draws.std()
        assert spread[4.0] == pytest.approx(2.0 * spread[8.0], rel=0.05)
