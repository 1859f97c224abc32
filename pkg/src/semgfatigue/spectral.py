"""Windowed power spectra and the spectral fatigue indices (MNF, MDF, FInsm5)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, EmptySpectrum, RectifiedInputError, ValidationError
from .signal import DEFAULT_SAMPLE_RATE, Window, as_window

DEFAULT_SPECTRAL_WINDOW = 1.024
DEFAULT_SPECTRAL_HOP = 0.512
MIN_SPECTRAL_LENGTH = 8


@dataclass(frozen=True, eq=False)
class SpectralEstimate:
    """One-sided power spectrum of a single analysis window.

    ``power`` is in mV^2 per bin and sums to the variance of the window.
    """

    frequencies: np.ndarray
    power: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=np.float64)
        p = np.asarray(self.power, dtype=np.float64)
        if f.shape != p.shape or f.ndim != 1:
            raise ValidationError("frequencies and power must be 1-D arrays of equal length")
        if np.any(p < 0):
            raise ValidationError("power must be non-negative")
        if np.any(np.diff(f) <= 0):
            raise ValidationError("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "power", p)

    @property
    def total_power(self) -> float:
        return float(self.power.sum())

    @property
    def resolution(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])


def check_not_rectified(window: Window, what: str) -> None:
    if window.rectified:
        raise RectifiedInputError(
            f"{what} is undefined on full-wave rectified data; record without the rectifier stage"
        )


def power_spectrum(window, sample_rate: float | None = None) -> SpectralEstimate:
    """Hann-tapered periodogram of the mean-removed window.

    The taper changes the total power of the window, so the estimate is rescaled
    to put the window variance back (``sum(power) == var(x)``). Shape-based indices
    are unaffected by that rescaling.
    """
    window = as_window(window, sample_rate or DEFAULT_SAMPLE_RATE)
    check_not_rectified(window, "power spectrum")
    fs = sample_rate or window.sample_rate
    n = window.length
    if n < MIN_SPECTRAL_LENGTH:
        raise ValidationError(f"spectral window needs >= {MIN_SPECTRAL_LENGTH} samples, got {n}")

    x = window.values - window.values.mean()
    taper = np.hanning(n)
    spec = np.fft.rfft(x * taper)
    power = np.abs(spec) ** 2
    # one-sided: double everything except DC and (even n) Nyquist
    if n % 2 == 0:
        power[1:-1] *= 2.0
    else:
        power[1:] *= 2.0

    target = float(np.mean(x * x))
    total = power.sum()
    if total > 0 and target > 0:
        power *= target / total
    else:
        power[:] = 0.0
    return SpectralEstimate(np.fft.rfftfreq(n, d=1.0 / fs), power)


def _require_power(spectrum: SpectralEstimate) -> float:
    total = spectrum.total_power
    if not total > 0:
        raise EmptySpectrum("spectrum has zero total power")
    return total


def mean_frequency(spectrum: SpectralEstimate) -> float:
    total = _require_power(spectrum)
    return float(np.dot(spectrum.frequencies, spectrum.power) / total)


def median_frequency(spectrum: SpectralEstimate) -> float:
    """Frequency that splits the power in half.

    Cumulative power is treated as reaching ``cum[k]`` at bin ``k``; inside the
    bin where it first reaches half the total, the crossing is interpolated
    linearly from the previous bin.
    """
    total = _require_power(spectrum)
    cum = np.cumsum(spectrum.power)
    half = 0.5 * total
    k = int(np.searchsorted(cum, half, side="left"))
    f = spectrum.frequencies
    if k == 0:
        return float(f[0])
    lo, hi = cum[k - 1], cum[k]
    frac = (half - lo) / (hi - lo)
    return float(f[k - 1] + frac * (f[k] - f[k - 1]))


def spectral_moment(spectrum: SpectralEstimate, order: float, exclude_dc: bool = True) -> float:
    f, p = spectrum.frequencies, spectrum.power
    if exclude_dc:
        keep = f > 0
        f, p = f[keep], p[keep]
    return float(np.dot(f**order, p))


def dimitrov_index(spectrum: SpectralEstimate, low_order: float = -1, high_order: float = 5) -> float:
    """Spectral fatigue index FInsm5 = M(-1) / M(5), DC bin excluded."""
    _require_power(spectrum)
    positive = spectrum.frequencies > 0
    if not np.any(spectrum.power[positive] > 0):
        raise DegenerateSpectrum("all spectral power sits in the DC bin")
    return spectral_moment(spectrum, low_order) / spectral_moment(spectrum, high_order)
