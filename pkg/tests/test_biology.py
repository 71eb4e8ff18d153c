import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from racewaybench import (ConfigError, ModelError, biological_rates,
                          do_inhibition, light_limitation, smooth_window)


class TestSmoothWindow:
    def test_zero_at_lower_bound(self):
        assert smooth_window(5.0, 5.0, 30.0, 45.0) == 0.0

    def test_one_at_optimum(self):
        assert smooth_window(30.0, 5.0, 30.0, 45.0) == 1.0

    def test_half_at_rising_midpoint(self):
        assert smooth_window(17.5, 5.0, 30.0, 45.0) == pytest.approx(0.5)

    def test_zero_outside(self):
        assert smooth_window(-3.0, 5.0, 30.0, 45.0) == 0.0
        assert smooth_window(60.0, 5.0, 30.0, 45.0) == 0.0

    def test_bad_ordering_rejected(self):
        with pytest.raises(ConfigError):
            smooth_window(1.0, 10.0, 5.0, 45.0)
        with pytest.raises(ConfigError):
            smooth_window(1.0, 5.0, 45.0, 45.0)

    @settings(max_examples=200, deadline=None)
    @given(x=st.floats(-20.0, 70.0))
    def test_bounded_in_unit_interval(self, x):
        mu = smooth_window(x, 5.0, 30.0, 45.0)
        assert 0.0 <= mu <= 1.0

    def test_continuity_and_flat_tangents(self):
        # slopes vanish at the three knots (smoothstep property)
        eps = 1e-6
        for knot in (5.0, 30.0, 45.0):
            left = smooth_window(knot - eps, 5.0, 30.0, 45.0)
            mid = smooth_window(knot, 5.0, 30.0, 45.0)
            right = smooth_window(knot + eps, 5.0, 30.0, 45.0)
            assert abs(mid - left) < 1e-10
            assert abs(right - mid) < 1e-10


class TestLightLimitation:
    def test_clear_culture_sees_surface_irradiance(self, params):
        i_av, _ = light_limitation(800.0, 0.0, 0.15, params)
        assert i_av == 800.0

    def test_half_saturation(self, params):
        # biomass/depth chosen so the averaged irradiance equals i_k
        bio = params.biological
        i_av, mu_i = light_limitation(bio.i_k, 1e-12, 0.15, params)
        assert i_av == pytest.approx(bio.i_k, rel=1e-9)
        assert mu_i == pytest.approx(0.5, rel=1e-6)

    def test_night(self, params):
        assert light_limitation(0.0, 500.0, 0.15, params) == (0.0, 0.0)

    def test_attenuation_reduces_mean_irradiance(self, params):
        i_thin, _ = light_limitation(800.0, 100.0, 0.15, params)
        i_dense, _ = light_limitation(800.0, 1500.0, 0.15, params)
        assert i_dense < i_thin < 800.0

    def test_series_limit_continuous_at_switch(self, params):
        # the series branch and the exact branch agree near the threshold
        bio = params.biological
        x_at = 1e-8 / (bio.k_a * 0.15)
        below, _ = light_limitation(800.0, x_at * 0.99, 0.15, params)
        above, _ = light_limitation(800.0, x_at * 1.01, 0.15, params)
        assert below == pytest.approx(above, rel=1e-9)

    def test_invalid_inputs(self, params):
        with pytest.raises(ModelError):
            light_limitation(-1.0, 0.0, 0.15, params)
        with pytest.raises(ModelError):
            light_limitation(100.0, 0.0, 0.0, params)


class TestDoInhibition:
    def test_no_oxygen_no_inhibition(self, params):
        assert do_inhibition(0.0, params) == 1.0

    def test_zero_at_scale_limit(self, params):
        assert do_inhibition(params.biological.do_max_pct, params) == \
            pytest.approx(0.0, abs=1e-12)

    def test_clamped_above_limit(self, params):
        assert do_inhibition(params.biological.do_max_pct + 50.0, params) == 0.0

    @settings(max_examples=100, deadline=None)
    @given(do=st.floats(0.0, 1000.0))
    def test_unit_interval(self, do, params):
        assert 0.0 <= do_inhibition(do, params) <= 1.0


class TestBiologicalRates:
    def test_night_respiration(self, params):
        bio = params.biological
        r = biological_rates(25.0, 8.0, 100.0, 0.0, 500.0, 0.15, params)
        assert r.p_gross == 0.0
        expected = (bio.m_min * (1.0 + bio.k_resp)
                    * bio.q10 ** ((25.0 - 20.0) / 10.0))
        assert r.m_resp == pytest.approx(expected, rel=1e-12)

    def test_basal_respiration_at_reference_temp(self, params):
        # saturating light at 20 degC leaves only the basal rate
        r = biological_rates(20.0, 8.0, 0.0, 1e9, 1e-9, 0.15, params)
        assert r.mu_i == pytest.approx(1.0, rel=1e-6)
        assert r.m_resp == pytest.approx(params.biological.m_min, rel=1e-4)

    def test_unconstrained_growth_is_allocation_times_max(self, params):
        bio = params.biological
        r = biological_rates(bio.t_opt, bio.ph_opt, 0.0, 1e9, 1e-9, 0.15,
                             params)
        assert r.mu_g == pytest.approx(bio.eta_x * bio.mu_max, rel=1e-5)

    def test_all_factors_in_unit_interval(self, params):
        r = biological_rates(33.0, 8.7, 220.0, 900.0, 800.0, 0.2, params)
        for f in (r.mu_i, r.mu_t, r.mu_ph, r.mu_do):
            assert 0.0 <= f <= 1.0
        assert r.p_gross >= 0.0
        assert r.mu_g == pytest.approx(params.biological.eta_x * r.p_gross)

    @settings(max_examples=200, deadline=None)
    @given(temp=st.floats(-5.0, 55.0), ph=st.floats(3.0, 13.0),
           do=st.floats(0.0, 600.0), par=st.floats(0.0, 3000.0),
           x_alg=st.floats(0.0, 5000.0), depth=st.floats(0.05, 0.5))
    def test_limitation_bounds_property(self, params, temp, ph, do, par,
                                        x_alg, depth):
        r = biological_rates(temp, ph, do, par, x_alg, depth, params)
        for f in (r.mu_i, r.mu_t, r.mu_ph, r.mu_do):
            assert 0.0 <= f <= 1.0
        assert r.p_gross >= 0.0
        assert r.m_resp >= 0.0
