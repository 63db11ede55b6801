"""Tests for the Edgeworth-corrected CDF and sup-distance utilities."""

import math

import numpy as np
import pytest
from scipy import stats as sps

from chaosboot import doubling_map
from chaosboot.edgeworth import (
    default_grid,
    edgeworth_cdf,
    estimate_asymptotic_moments,
    sup_distance,
)
from chaosboot.errors import ParameterError, ScaleError
from chaosboot.stats import Ecdf, Moments, identity_observable


class TestEdgeworthCdf:
    def test_zero_correction_is_normal(self):
        m = Moments(spatial_mean=0.5, long_run_sd=1.0, third_moment=0.0, init_bias=0.0)
        x = default_grid()
        np.testing.assert_allclose(edgeworth_cdf(m, 25, x), sps.norm.cdf(x), atol=1e-15)

    def test_hand_worked_value(self):
        # at x = 0: Phi(0) + [M/(6 s^3) * 1 + b/s] * phi(0) / sqrt(n)
        m = Moments(spatial_mean=0.0, long_run_sd=2.0, third_moment=0.48, init_bias=0.1)
        n = 16
        expected = 0.5 + (0.48 / (6 * 8.0) + 0.1 / 2.0) * sps.norm.pdf(0.0) / 4.0
        assert edgeworth_cdf(m, n, 0.0) == pytest.approx(expected, abs=1e-15)

    def test_correction_shrinks_with_n(self):
        m = Moments(spatial_mean=0.0, long_run_sd=1.0, third_moment=0.3, init_bias=0.05)
        x = np.array([0.7])
        d25 = abs(edgeworth_cdf(m, 25, x)[0] - sps.norm.cdf(0.7))
        d100 = abs(edgeworth_cdf(m, 100, x)[0] - sps.norm.cdf(0.7))
        assert d25 == pytest.approx(2.0 * d100, rel=1e-12)

    def test_clipped_to_unit_interval(self):
        m = Moments(spatial_mean=0.0, long_run_sd=0.1, third_moment=5.0, init_bias=2.0)
        vals = edgeworth_cdf(m, 1, default_grid())
        assert np.all((vals >= 0.0) & (vals <= 1.0))

    def test_bad_scale(self):
        m = Moments(spatial_mean=0.0, long_run_sd=0.0, third_moment=0.0, init_bias=0.0)
        with pytest.raises(ScaleError):
            edgeworth_cdf(m, 25, 0.0)

    def test_bad_n(self):
        m = Moments(spatial_mean=0.0, long_run_sd=1.0, third_moment=0.0, init_bias=0.0)
        with pytest.raises(ParameterError):
            edgeworth_cdf(m, 0, 0.0)


class TestEstimateAsymptoticMoments:
    def test_doubling_identity(self):
        # Lebesgue-invariant doubling map, h = x: mean 1/2, long-run sd 1/2,
        # and both correction moments vanish asymptotically
        spec = doubling_map()
        m = estimate_asymptotic_moments(
            spec, identity_observable(), 50, 40_000, np.random.default_rng(0)
        )
        assert m.spatial_mean == pytest.approx(0.5, abs=0.005)
        assert m.long_run_sd == pytest.approx(0.5, abs=0.02)
        assert abs(m.init_bias) < 0.05
        assert math.isfinite(m.third_moment)

    def test_deterministic(self):
        spec = doubling_map()
        h = identity_observable()
        a = estimate_asymptotic_moments(spec, h, 10, 200, np.random.default_rng(1))
        b = estimate_asymptotic_moments(spec, h, 10, 200, np.random.default_rng(1))
        assert a == b

    def test_needs_reps(self):
        with pytest.raises(ParameterError):
            estimate_asymptotic_moments(
                doubling_map(), identity_observable(), 10, 1, np.random.default_rng(2)
            )


class TestSupDistance:
    def test_identical_callables(self):
        f = sps.norm.cdf
        assert sup_distance(f, f, default_grid()) == 0.0

    def test_shifted_normals_analytic(self):
        # sup_x |Phi(x) - Phi(x - mu)| is attained at x = mu/2
        mu = 0.8
        f = sps.norm.cdf
        g = lambda x: sps.norm.cdf(np.asarray(x) - mu)
        want = sps.norm.cdf(mu / 2) - sps.norm.cdf(-mu / 2)
        got = sup_distance(f, g, default_grid())
        assert got == pytest.approx(want, abs=1e-5)

    def test_ecdf_jump_handled_on_both_sides(self):
        # a single atom at 0 vs the standard normal: the sup is the left
        # limit 1/2 just below the jump, not a grid artifact
        e = Ecdf([0.0])
        got = sup_distance(e, sps.norm.cdf, np.array([-3.0, 3.0]))
        assert got == pytest.approx(0.5, abs=1e-12)

    def test_symmetric_arguments(self):
        e = Ecdf([-0.5, 0.1, 0.7])
        g = default_grid()
        assert sup_distance(e, sps.norm.cdf, g) == sup_distance(sps.norm.cdf, e, g)

    def test_two_ecdfs(self):
        a = Ecdf([0.0, 1.0])
        b = Ecdf([0.0, 1.0, 2.0])
        # largest gap is on [1, 2): F_a = 1, F_b = 2/3
        assert sup_distance(a, b, np.array([0.5])) == pytest.approx(1 / 3, abs=1e-12)

    def test_empty_grid(self):
        with pytest.raises(ParameterError):
            sup_distance(sps.norm.cdf, sps.norm.cdf, np.array([]))


def test_default_grid():
    g = default_grid()
    assert g[0] == -5.0 and g[-1] == 5.0 and len(g) == 2001
    assert np.all(np.diff(g) > 0)
