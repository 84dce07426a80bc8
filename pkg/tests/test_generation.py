"""PV and wind power curves."""

import math

import pytest

from microgridsim import (
    SolarPanel,
    WeatherSample,
    WindTurbine,
    clear_sky_factor,
    pv_power,
    wind_power,
)

PANEL = SolarPanel("pv", "b1", 500.0)
TURBINE = WindTurbine("wt", "b1", 1500.0)  # cut-in 3, rated 12, cut-out 25


def sample(hour, cloud):
    return WeatherSample(0, hour, cloud, 0.0, 15.0)


class TestClearSky:
    def test_noon_peak(self):
        assert clear_sky_factor(12) == 1.0

    def test_night_exactly_zero(self):
        for hour in (0, 3, 6, 18, 21, 23):
            assert clear_sky_factor(hour) == 0.0

    def test_mid_morning(self):
        assert clear_sky_factor(9) == pytest.approx(math.sin(math.pi / 4), abs=1e-12)
        assert clear_sky_factor(9) == pytest.approx(0.70711, abs=5e-6)

    def test_fractional_hours(self):
        assert clear_sky_factor(6.5) > 0.0
        assert clear_sky_factor(17.9) > 0.0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            clear_sky_factor(24.0)
        with pytest.raises(ValueError):
            clear_sky_factor(-1.0)


class TestPvPower:
    def test_clear_noon_is_peak(self):
        assert pv_power(PANEL, sample(12, 0.0)) == 500.0

    def test_night_is_zero_any_cloud(self):
        for cloud in (0.0, 0.5, 1.0):
            assert pv_power(PANEL, sample(0, cloud)) == 0.0
            assert pv_power(PANEL, sample(18, cloud)) == 0.0

    def test_full_overcast_noon(self):
        assert pv_power(PANEL, sample(12, 1.0)) == pytest.approx(125.0)

    def test_non_increasing_in_cloud(self):
        for hour in range(7, 18):
            outputs = [pv_power(PANEL, sample(hour, c / 20)) for c in range(21)]
            assert all(b <= a for a, b in zip(outputs, outputs[1:]))

    def test_bounded_by_peak(self):
        for hour in range(24):
            for c in (0.0, 0.3, 1.0):
                assert 0.0 <= pv_power(PANEL, sample(hour, c)) <= PANEL.peak_power


class TestWindPower:
    def test_below_cut_in(self):
        assert wind_power(TURBINE, 2.0) == 0.0

    def test_rated_speed_gives_peak(self):
        assert wind_power(TURBINE, 12.0) == 1500.0

    def test_cubic_midpoint(self):
        assert wind_power(TURBINE, 7.5) == pytest.approx(1500.0 * 0.5**3)

    def test_continuous_at_cut_in_and_rated(self):
        eps = 1e-9
        assert wind_power(TURBINE, 3.0) == 0.0
        assert wind_power(TURBINE, 3.0 + eps) < 1e-20
        assert wind_power(TURBINE, 12.0 - eps) == pytest.approx(1500.0, rel=1e-6)

    def test_discontinuous_at_cut_out(self):
        assert wind_power(TURBINE, 25.0 - 1e-9) == 1500.0
        assert wind_power(TURBINE, 25.0) == 0.0
        assert wind_power(TURBINE, 40.0) == 0.0

    def test_non_decreasing_below_cut_out(self):
        speeds = [i * 25.0 / 1000 for i in range(1000)]
        outputs = [wind_power(TURBINE, v) for v in speeds]
        assert all(b >= a for a, b in zip(outputs, outputs[1:]))

    def test_bounded_by_peak(self):
        for v in (0.0, 3.0, 5.0, 11.999, 12.0, 24.0, 25.0, 100.0):
            assert 0.0 <= wind_power(TURBINE, v) <= TURBINE.peak_power

    def test_negative_speed_rejected(self):
        with pytest.raises(ValueError):
            wind_power(TURBINE, -0.1)
