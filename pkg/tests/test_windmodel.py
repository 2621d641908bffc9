import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from curtailgame import windmodel as wm


def test_rng_is_pcg64_and_reproducible():
    assert wm.RNG_ALGORITHM == "numpy.PCG64"
    a = wm.make_rng(5).random(4)
    b = np.random.Generator(np.random.PCG64(5)).random(4)
    assert np.array_equal(a, b)


def test_spawned_seeds_are_distinct_and_stable():
    s = wm.spawn_seeds(1, 3)
    assert len(set(s)) == 3
    assert s == wm.spawn_seeds(1, 3)


class TestHourSeason:
    def test_labels(self):
        ts = np.array(["2001-03-01T00", "2001-06-15T23", "2001-10-01T12", "2001-12-31T05", "2002-02-28T01"],
                      dtype="datetime64[h]")
        hours, seasons = wm.hour_season_index(ts)
        assert hours.tolist() == [1, 24, 13, 6, 2]
        assert seasons.tolist() == [1, 2, 3, 4, 4]

    def test_all_keys(self):
        keys = wm.HourSeasonKey.all()
        assert len(keys) == 96 and len(set(keys)) == 96
        assert keys[0] == wm.HourSeasonKey(1, 1)

    def test_key_text_names_hour_and_season(self):
        assert str(wm.HourSeasonKey(18, 4)) == "hour 18 (17:00), Winter"

    def test_invalid_key(self):
        with pytest.raises(ValueError):
            wm.HourSeasonKey(0, 1)


class TestWindSeries:
    def test_rejects_negative_or_unsorted(self):
        ts = np.array(["2001-01-01T00", "2001-01-01T01"], dtype="datetime64[h]")
        with pytest.raises(ValueError):
            wm.WindSeries("a", 10, ts, [1.0, -1.0])
        with pytest.raises(ValueError):
            wm.WindSeries("a", 10, ts[::-1], [1.0, 1.0])

    def test_select(self):
        s = wm.sample_wind(wm.WeibullParams(9, 1.8), 10, 0)
        sub = s.select(s.timestamps[[2, 5]])
        assert np.array_equal(sub.speeds, s.speeds[[2, 5]])
        assert not sub.is_contiguous and s.is_contiguous
        with pytest.raises(ValueError):
            s.select(np.array(["1999-01-01T00"], dtype="datetime64[h]"))


class TestPowerCurve:
    def test_sigmoid_midpoint_and_cutoffs(self):
        c = wm.PowerCurve.enercon_e82()
        assert c(c.sigmoid_b) == pytest.approx(0.5)
        assert c(2.99) == 0.0
        assert c(28.0) == 0.0
        assert 0 < c(3.0) < c(13.0) < c(27.9) <= 1

    def test_cubic_curve(self):
        c = wm.PowerCurve.generic()
        assert c(3.0) == 0.0
        assert c(8.0) == pytest.approx((8**3 - 27) / (13**3 - 27))
        assert c(13.0) == 1.0 and c(24.9) == 1.0 and c(25.0) == 0.0

    @given(st.lists(st.floats(0, 60), min_size=1, max_size=50))
    def test_output_in_unit_interval(self, speeds):
        for curve in (wm.PowerCurve.enercon_e82(), wm.PowerCurve.generic()):
            p = curve(speeds)
            assert np.all((p >= 0) & (p <= 1))

    def test_invalid_speeds(self):
        with pytest.raises(ValueError):
            wm.PowerCurve(cut_in=5, rated_speed=4)


class TestShear:
    def test_reference_value(self):
        # 10 m/s at 10 m, roughness 0.03 m, lifted to 85 m.
        v = 10 * wm.shear_factor(10, 85, 0.03)
        assert v == pytest.approx(10 * math.log(85 / 0.03) / math.log(10 / 0.03), rel=1e-15)
        assert abs(v - 13.683) < 1e-3

    def test_identity_and_errors(self):
        assert wm.shear_factor(10, 10, 0.03) == 1.0
        with pytest.raises(ValueError):
            wm.shear_factor(0.03, 85, 0.03)

    def test_extrapolate_keeps_zero(self):
        s = wm.WindSeries("a", 10, np.array(["2001-01-01T00", "2001-01-01T01"], dtype="datetime64[h]"), [0.0, 10.0])
        h = wm.extrapolate_hub(s)
        assert h.height_m == 85 and h.speeds[0] == 0.0


class TestFitting:
    def test_weibull_matches_scipy(self):
        u = wm.sample_wind(wm.WeibullParams(9, 1.8), 5000, 3).speeds
        fit = wm.fit_weibull(u)
        k_ref, _, c_ref = stats.weibull_min.fit(u, floc=0)
        assert fit.shape_k == pytest.approx(k_ref, rel=1e-5)
        assert fit.scale_c == pytest.approx(c_ref, rel=1e-5)

    def test_weibull_recovers_parameters(self):
        fit = wm.fit_weibull(wm.sample_wind(wm.WeibullParams(9, 1.8), 50_000, 1).speeds)
        assert fit.scale_c == pytest.approx(9, rel=0.02)
        assert fit.shape_k == pytest.approx(1.8, rel=0.02)

    def test_weibull_excludes_zeros(self):
        u = np.concatenate([wm.sample_wind(wm.WeibullParams(6, 2), 300, 2).speeds, np.zeros(100)])
        fit = wm.fit_weibull(u)
        assert fit.excluded_fraction == pytest.approx(0.25)
        assert fit == wm.fit_weibull(u[u > 0])

    def test_weibull_errors(self):
        with pytest.raises(wm.FitError):
            wm.fit_weibull(np.ones(10))
        with pytest.raises(wm.FitError, match="identical"):
            wm.fit_weibull(np.full(40, 5.0))
        with pytest.raises(wm.FitError, match="zero"):
            wm.fit_weibull(np.zeros(40))

    def test_beta_matches_scipy(self):
        x = wm.BetaParams(2.0, 5.0).sample(5000, 4)
        fit = wm.fit_beta(x)
        a_ref, b_ref, _, _ = stats.beta.fit(x, floc=0, fscale=1)
        assert fit.alpha == pytest.approx(a_ref, rel=1e-3)
        assert fit.beta == pytest.approx(b_ref, rel=1e-3)

    def test_beta_clamps_bounds(self):
        x = np.concatenate([wm.BetaParams(0.5, 0.8).sample(500, 1), np.zeros(50), np.ones(50)])
        fit = wm.fit_beta(x)
        assert fit.alpha > 0 and fit.beta > 0

    def test_beta_degenerate(self):
        with pytest.raises(wm.FitError, match="degenerate"):
            wm.fit_beta(np.zeros(50))

    @pytest.mark.parametrize("params", [wm.WeibullParams(9, 1.8), wm.WeibullParams(3, 0.9),
                                        wm.BetaParams(2, 5), wm.BetaParams(0.6, 0.4)])
    def test_density_integrates_to_one(self, params):
        assert wm.density_integral(params) == pytest.approx(1.0, abs=1e-6)

    def test_weibull_mean(self):
        assert wm.WeibullParams(9, 1.8).mean() == pytest.approx(9 * math.gamma(1 + 1 / 1.8))
        assert stats.weibull_min(1.8, scale=9).cdf(7) == pytest.approx(wm.WeibullParams(9, 1.8).cdf(7))


class TestCorrelation:
    def test_weight(self):
        assert wm.correlation_weight(0) == 0.0
        assert wm.correlation_weight(1) == 1.0
        assert wm.correlation_weight(0.5) == pytest.approx(0.5)
        with pytest.raises(ValueError):
            wm.correlation_weight(1.5)

    def test_extremes_are_exact_copies(self):
        a = wm.sample_wind(wm.WeibullParams(9, 1.8), 100, 1)
        b = wm.sample_wind(wm.WeibullParams(9, 1.8), 100, 2)
        assert np.array_equal(wm.correlate(a, b, 1.0).speeds, a.speeds)
        assert np.array_equal(wm.correlate(a, b, 0.0).speeds, b.speeds)

    def test_sample_correlation_rises_with_r(self):
        corr = []
        for r in (0, 0.25, 0.5, 0.75, 1):
            s = wm.fleet_wind(2, wm.WeibullParams(9, 1.8), r, 20_000, 0)
            corr.append(np.corrcoef(s[0].speeds, s[1].speeds)[0, 1])
        assert np.all(np.diff(corr) > 0)
        assert abs(corr[0]) < 0.03 and corr[-1] == pytest.approx(1.0)

    def test_fleet_wind_paired_across_r(self):
        a = wm.fleet_wind(3, wm.WeibullParams(9, 1.8), 0.0, 50, 9)
        b = wm.fleet_wind(3, wm.WeibullParams(9, 1.8), 0.7, 50, 9)
        assert a[0] == b[0]
        assert [s.location_id for s in a] == ["site1", "site2", "site3"]

    @settings(max_examples=30)
    @given(st.floats(0, 1), st.integers(0, 2**32))
    def test_blend_stays_between_inputs(self, r, seed):
        a = wm.sample_wind(wm.WeibullParams(9, 1.8), 20, seed)
        b = wm.sample_wind(wm.WeibullParams(9, 1.8), 20, seed + 1)
        c = wm.correlate(a, b, r).speeds
        lo, hi = np.minimum(a.speeds, b.speeds), np.maximum(a.speeds, b.speeds)
        assert np.all((c >= lo - 1e-12) & (c <= hi + 1e-12))


class TestJointHistogram:
    def test_probabilities_sum_to_one(self):
        rng = wm.make_rng(0)
        d = wm.joint_histogram(rng.random(1000), rng.random(1000), bins=10)
        assert d.probs.sum() == pytest.approx(1.0)
        assert d.n_samples == 1000 and d.bin_count == 10

    def test_endpoints_land_in_edge_bins(self):
        d = wm.joint_histogram([0.0, 1.0], [1.0, 0.0], bins=4)
        assert d.probs[0, 3] == 0.5 and d.probs[3, 0] == 0.5

    def test_sample_stays_in_cells(self):
        d = wm.joint_histogram([0.1, 0.9], [0.1, 0.9], bins=2)
        x1, x2 = d.sample(1000, 3)
        assert np.all((x1 < 0.5) == (x2 < 0.5))

    def test_bad_input(self):
        with pytest.raises(ValueError):
            wm.joint_histogram([0.1], [0.1, 0.2])
        with pytest.raises(ValueError):
            wm.JointPowerDistribution(None, np.ones((2, 2)))
