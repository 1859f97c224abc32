import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semgfatigue.errors import DegenerateSpectrum, MaxLevelExceeded, RectifiedInputError, ValidationError
from semgfatigue.signal import Window
from semgfatigue.wavelets import (
    DEFAULT_WAVELET_RATIOS,
    SCALING_FILTERS,
    WaveletRatio,
    dwt,
    idwt,
    max_level,
    parse_ratio,
    wavelet_filters,
    wavelet_indices,
    wavelet_moment,
)

FAMILIES = ("sym5", "db5")
FS = 1000.0


def band_noise(center, n, seed, width=40.0):
    rng = np.random.default_rng(seed)
    spec = np.fft.rfft(rng.normal(size=n))
    f = np.fft.rfftfreq(n, 1 / FS)
    return np.fft.irfft(spec * (np.abs(f - center) < width / 2), n)


@pytest.mark.parametrize("family", FAMILIES)
class TestFilters:
    def test_matches_reference_library(self, family):
        pywt = pytest.importorskip("pywt")
        h, _ = wavelet_filters(family)
        np.testing.assert_allclose(h, pywt.Wavelet(family).rec_lo, rtol=0, atol=1e-15)

    def test_orthonormal(self, family):
        h, g = wavelet_filters(family)
        assert np.dot(h, h) == pytest.approx(1.0, abs=1e-12)
        assert h.sum() == pytest.approx(np.sqrt(2), abs=1e-12)
        for shift in range(2, h.size, 2):
            assert np.dot(h[:-shift], h[shift:]) == pytest.approx(0.0, abs=1e-12)
            assert np.dot(h[:-shift], g[shift:]) == pytest.approx(0.0, abs=1e-12)
        assert np.dot(h, g) == pytest.approx(0.0, abs=1e-12)

    def test_five_vanishing_moments(self, family):
        _, g = wavelet_filters(family)
        n = np.arange(g.size, dtype=float)
        for p in range(5):
            assert np.dot(n**p, g) == pytest.approx(0.0, abs=1e-6 * max(1.0, (g.size) ** p))


@pytest.mark.parametrize("family", FAMILIES)
class TestTransform:
    @pytest.mark.parametrize("n", [320, 333, 1024, 1500, 4096])
    def test_perfect_reconstruction_and_energy(self, family, n):
        x = np.random.default_rng(n).normal(size=n)
        d = dwt(x, family, 5, FS)
        y = idwt(d)
        assert np.linalg.norm(y - x) / np.linalg.norm(x) <= 1e-8
        assert d.energy() == pytest.approx(np.dot(x, x), rel=1e-6)
        assert d.band_energies().sum() == pytest.approx(np.dot(x, x), rel=1e-6)

    def test_constant_signal_details_vanish(self, family):
        d = dwt(np.full(1024, 3.7), family, 5, FS)
        for detail in d.details:
            assert np.max(np.abs(detail)) < 1e-8

    def test_low_order_polynomial_details_vanish_inside(self, family):
        # away from the circular wrap, a quadratic is annihilated too
        t = np.linspace(0, 1, 1024)
        d = dwt(1 + 2 * t - 3 * t**2, family, 1, FS)
        taps = SCALING_FILTERS[family].size
        assert np.max(np.abs(d.details[0][: 512 - taps])) < 1e-8

    def test_max_level(self, family):
        with pytest.raises(MaxLevelExceeded):
            dwt(np.ones(319), family, 5, FS)
        assert max_level(320, family) == 5
        assert max_level(319, family) == 4

    def test_rectified_rejected(self, family):
        w = Window(0, 1024, np.ones(1024), FS, rectified=True)
        with pytest.raises(RectifiedInputError):
            dwt(w, family)
        with pytest.raises(RectifiedInputError):
            wavelet_indices(w, family=family)

    def test_band_layout(self, family):
        d = dwt(np.ones(1024), family, 5, FS)
        assert d.band_edges[0] == (250.0, 500.0)
        assert d.band_edges[4] == (15.625, 31.25)
        assert d.approximation_band == (0.0, 15.625)


@pytest.mark.parametrize("family", FAMILIES)
class TestIndices:
    def test_zero_signal(self, family):
        with pytest.raises(DegenerateSpectrum):
            wavelet_indices(np.zeros(1024), FS, family)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
    def test_power_scaling_invariance(self, family, seed, a):
        x = np.random.default_rng(seed).normal(size=1024)
        base = wavelet_indices(x, FS, family)
        scaled = wavelet_indices(a * x, FS, family)
        for name in base:
            assert scaled[name] == pytest.approx(base[name], rel=1e-9)

    @pytest.mark.parametrize("seed", range(10))
    def test_left_shift_increases_all(self, family, seed):
        high = wavelet_indices(band_noise(150.0, 4096, seed), FS, family)
        low = wavelet_indices(band_noise(100.0, 4096, seed), FS, family)
        for name in DEFAULT_WAVELET_RATIOS:
            assert low[name] > high[name], name

    def test_all_positive(self, family):
        out = wavelet_indices(np.random.default_rng(0).normal(size=1024), FS, family)
        assert set(out) == {"WIRM1551", "WIRM1M51", "WIRM1522"}
        assert all(v > 0 for v in out.values())


class TestRatios:
    def test_moment_by_hand(self):
        d = dwt(np.random.default_rng(3).normal(size=1024), "db5", 5, FS)
        e, c = d.band_energies(), d.band_centers()
        assert wavelet_moment(d, 2, (2,)) == pytest.approx(c[1] ** 2 * e[1])
        assert wavelet_moment(d, -1, ("M",)) == pytest.approx(np.sum(e / c))
        assert wavelet_moment(d, 0, ("A",)) == pytest.approx(e[5])

    def test_custom_ratio(self):
        x = np.random.default_rng(4).normal(size=1024)
        custom = {"R": WaveletRatio(0, ("M",), 0, ("M",))}
        assert wavelet_indices(x, FS, ratios=custom)["R"] == pytest.approx(1.0)

    def test_parse_ratio(self):
        r = parse_ratio({"num_order": -1, "num_scales": "m", "den_order": 5, "den_scales": [1]})
        assert r == DEFAULT_WAVELET_RATIOS["WIRM1M51"]

    def test_bad_scale(self):
        x = np.random.default_rng(4).normal(size=1024)
        with pytest.raises(ValidationError):
            wavelet_indices(x, FS, ratios={"R": WaveletRatio(0, (6,), 0, (1,))})
