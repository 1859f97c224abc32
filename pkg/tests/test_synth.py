import numpy as np
import pytest

from semgfatigue.errors import InvalidProfile
from semgfatigue.indices import channel_amplitude_series, channel_spectral_series
from semgfatigue.signal import rms
from semgfatigue.spectral import mean_frequency, power_spectrum
from semgfatigue.synth import GroundTruth, SyntheticProfile, evaluate_curve, synthesize
from semgfatigue.trend import linear_trend, percent_increase

FS = 1000.0


def iarv(profile):
    ch, truth = synthesize(profile, FS, "VastusMedialis")
    return channel_amplitude_series(ch, "iARV"), truth


class TestGenerator:
    def test_bit_reproducible(self):
        p = SyntheticProfile(5.0, noise_seed=42, drift_rate=0.3)
        a, _ = synthesize(p, FS)
        b, _ = synthesize(p, FS)
        assert a.samples.tobytes() == b.samples.tobytes()

    def test_seed_matters(self):
        a, _ = synthesize(SyntheticProfile(2.0, noise_seed=1), FS)
        b, _ = synthesize(SyntheticProfile(2.0, noise_seed=2), FS)
        assert not np.array_equal(a.samples, b.samples)

    def test_length_and_flags(self):
        ch, _ = synthesize(SyntheticProfile(2.5), FS, "RectusFemoris")
        assert ch.samples.size == 2500
        assert not ch.rectified

    def test_rms_matches_base_amplitude(self):
        ch, _ = synthesize(SyntheticProfile(60.0, base_amplitude=0.8, noise_seed=3), FS)
        assert rms(ch.samples) == pytest.approx(0.8, rel=0.1)

    def test_spectrum_centered(self):
        ch, _ = synthesize(SyntheticProfile(8.192, spectral_center_trajectory=((0, 150.0),), noise_seed=5), FS)
        assert mean_frequency(power_spectrum(ch.samples, FS)) == pytest.approx(150.0, abs=5.0)

    def test_drift_only(self):
        ch, _ = synthesize(SyntheticProfile(120.001, base_amplitude=0.0, drift_rate=1.0), FS)
        assert ch.samples[-1] == pytest.approx(2.0, abs=1e-6)

    def test_curve_interpolation(self):
        pts = ((0.0, 1.0), (10.0, 3.0))
        assert evaluate_curve(pts, [0.0, 5.0, 20.0]).tolist() == [1.0, 2.0, 3.0]


class TestGroundTruth:
    def test_per_window_grid(self):
        truth = GroundTruth(SyntheticProfile(10.0, amplitude_envelope=((0, 1.0), (10, 2.0))))
        grid = truth.per_window(0.2, 0.2, FS)
        assert grid["times"].size == 50
        assert grid["times"][0] == pytest.approx(0.1)
        assert grid["envelope"][-1] == pytest.approx(1.99)


class TestOracles:
    @pytest.mark.parametrize("seed", range(3))
    def test_flat_envelope_has_no_trend(self, seed):
        series, _ = iarv(SyntheticProfile(300.0, noise_seed=seed))
        smooth = np.convolve(series.values, np.ones(5) / 5, "valid")
        mean = smooth.mean()
        fitted_change = linear_trend(series) * series.times[-1] / 60.0
        assert abs(percent_increase(series)) <= 3.0
        assert abs(fitted_change / mean) <= 0.03

    @pytest.mark.parametrize("seed", range(3))
    def test_envelope_ratio(self, seed):
        series, truth = iarv(SyntheticProfile(300.0, amplitude_envelope=((0, 1.0), (300, 2.0)), noise_seed=seed))
        slope, intercept = np.polyfit(series.times, series.values, 1)
        assert (intercept + slope * 300.0) / intercept == pytest.approx(2.0, rel=0.05)
        # 30 s means follow the ground-truth envelope ratio
        head, tail = series.times < 30.0, series.times > series.times[-1] - 30.0
        env = truth.envelope(series.times)
        measured = series.values[tail].mean() / series.values[head].mean()
        assert measured == pytest.approx(env[tail].mean() / env[head].mean(), rel=0.05)

    def test_ramp_is_monotone_after_smoothing(self):
        series, _ = iarv(SyntheticProfile(120.0, amplitude_envelope=((0, 1.0), (120, 2.0)), noise_seed=2))
        # 10 s blocks (each well above the 1 s minimum smoothing)
        blocks = series.values[: 600].reshape(12, 50).mean(axis=1)
        assert np.all(np.diff(blocks) > 0)

    def test_mean_frequency_tracks_center(self):
        p = SyntheticProfile(120.0, spectral_center_trajectory=((0, 150.0), (120, 120.0)), noise_seed=4)
        ch, _ = synthesize(p, FS, "VastusMedialis")
        series = channel_spectral_series(ch)["iMNF"]
        drop = linear_trend(series) * p.duration / 60.0
        assert drop == pytest.approx(-30.0, abs=3.0)


class TestValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"duration": 0.0},
            {"duration": 10.0, "amplitude_envelope": ((0, 1.0), (5, 0.0))},
            {"duration": 10.0, "spectral_center_trajectory": ((0, 10.0),)},
            {"duration": 10.0, "spectral_center_trajectory": ((0, 460.0),)},
            {"duration": 10.0, "band_width": 300.0},
        ],
    )
    def test_invalid_profiles(self, kwargs):
        with pytest.raises(InvalidProfile):
            synthesize(SyntheticProfile(**kwargs), FS)

    def test_round_trip(self):
        p = SyntheticProfile(30.0, amplitude_envelope=((0, 1.2), (10, 0.9), (30, 1.8)), noise_seed=9)
        assert SyntheticProfile.from_dict(p.to_dict()) == p

    def test_unknown_key(self):
        with pytest.raises(InvalidProfile):
            SyntheticProfile.from_dict({"duration": 1.0, "colour": "red"})
