"""Seeded synthetic sEMG with a known fatigue trajectory.

The signal is a sum of random-phase sinusoids spread uniformly over a band.
All component frequencies are scaled together so the band center follows a
prescribed trajectory (spectral compression under fatigue), the total
amplitude follows a prescribed envelope (recruitment, second-wind dip), and an
optional linear baseline models sweat-induced drift.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidProfile
from .signal import DEFAULT_SAMPLE_RATE, ChannelSignal, MuscleLike

DEFAULT_COMPONENTS = 200
_CHUNK = 256  # rows per block; keeps the working set in cache

Points = tuple[tuple[float, float], ...]


def _points(value) -> Points:
    pts = tuple((float(t), float(v)) for t, v in value)
    if not pts:
        raise InvalidProfile("a piecewise-linear curve needs at least one control point")
    times = [t for t, _ in pts]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise InvalidProfile("control point times must be strictly increasing")
    return pts


def evaluate_curve(points: Points, t) -> np.ndarray:
    """Piecewise-linear interpolation, held constant outside the control points."""
    ts = np.array([p[0] for p in points])
    vs = np.array([p[1] for p in points])
    return np.interp(np.asarray(t, dtype=float), ts, vs)


@dataclass(frozen=True)
class SyntheticProfile:
    duration: float
    base_amplitude: float = 0.5  # mV RMS at envelope multiplier 1
    amplitude_envelope: Points = ((0.0, 1.0),)
    spectral_center_trajectory: Points = ((0.0, 120.0),)
    band_width: float = 80.0
    drift_rate: float = 0.0  # mV per minute
    noise_seed: int = 0
    n_components: int = DEFAULT_COMPONENTS
    hpf_cutoff: float = 20.0
    lpf_cutoff: float = 450.0

    def __post_init__(self):
        object.__setattr__(self, "amplitude_envelope", _points(self.amplitude_envelope))
        object.__setattr__(self, "spectral_center_trajectory", _points(self.spectral_center_trajectory))

    def validate(self, sample_rate: float = DEFAULT_SAMPLE_RATE) -> "SyntheticProfile":
        if not self.duration > 0:
            raise InvalidProfile(f"duration must be positive, got {self.duration}")
        if not self.base_amplitude >= 0:
            raise InvalidProfile("base_amplitude must be non-negative")
        if any(m <= 0 for _, m in self.amplitude_envelope):
            raise InvalidProfile("envelope multipliers must be positive")
        centers = [c for _, c in self.spectral_center_trajectory]
        if any(not self.hpf_cutoff < c < self.lpf_cutoff for c in centers):
            raise InvalidProfile(
                f"spectral centers must lie in ({self.hpf_cutoff}, {self.lpf_cutoff}) Hz, got {centers}"
            )
        c0 = float(evaluate_curve(self.spectral_center_trajectory, 0.0))
        if not 0 <= self.band_width < 2 * c0:
            raise InvalidProfile("band_width must be in [0, 2 * initial center)")
        top = max(centers) * (1 + self.band_width / (2 * c0))
        if top >= sample_rate / 2:
            raise InvalidProfile(f"band reaches {top:.1f} Hz, above Nyquist {sample_rate / 2} Hz")
        if self.n_components < 1:
            raise InvalidProfile("n_components must be >= 1")
        return self

    def with_seed(self, seed: int) -> "SyntheticProfile":
        return replace(self, noise_seed=seed)

    def to_dict(self) -> dict:
        return {
            "duration": self.duration,
            "base_amplitude": self.base_amplitude,
            "amplitude_envelope": [list(p) for p in self.amplitude_envelope],
            "spectral_center_trajectory": [list(p) for p in self.spectral_center_trajectory],
            "band_width": self.band_width,
            "drift_rate": self.drift_rate,
            "noise_seed": self.noise_seed,
            "n_components": self.n_components,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SyntheticProfile":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise InvalidProfile(f"unknown profile keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise InvalidProfile(str(exc)) from None


@dataclass(frozen=True)
class GroundTruth:
    """Exact envelope and band-center trajectories behind a synthetic signal."""

    profile: SyntheticProfile

    def envelope(self, t) -> np.ndarray:
        return evaluate_curve(self.profile.amplitude_envelope, t)

    def center(self, t) -> np.ndarray:
        return evaluate_curve(self.profile.spectral_center_trajectory, t)

    def amplitude(self, t) -> np.ndarray:
        """Expected RMS (mV) of the sinusoid sum at time ``t``."""
        return self.profile.base_amplitude * self.envelope(t)

    def per_window(self, window_duration: float, hop_duration: float, sample_rate: float = DEFAULT_SAMPLE_RATE) -> dict:
        n = int(round(self.profile.duration * sample_rate))
        win = int(round(window_duration * sample_rate))
        hop = int(round(hop_duration * sample_rate))
        starts = np.arange(0, n - win + 1, hop)
        times = (starts + win / 2) / sample_rate
        return {
            "times": times,
            "envelope": self.envelope(times),
            "center": self.center(times),
        }


def synthesize(
    profile: SyntheticProfile,
    sample_rate: float = DEFAULT_SAMPLE_RATE,
    muscle: MuscleLike = "Other",
) -> tuple[ChannelSignal, GroundTruth]:
    """Generate one channel of synthetic sEMG (mV, unrectified). Deterministic per seed."""
    profile.validate(sample_rate)
    n = int(round(profile.duration * sample_rate))
    if n < 1:
        raise InvalidProfile("duration is shorter than one sample")
    rng = np.random.default_rng(profile.noise_seed)
    k = profile.n_components
    c0 = float(evaluate_curve(profile.spectral_center_trajectory, 0.0))
    freqs = rng.uniform(c0 - profile.band_width / 2, c0 + profile.band_width / 2, size=k)
    phases = rng.uniform(0.0, 2 * np.pi, size=k)
    amp = profile.base_amplitude * np.sqrt(2.0 / k)

    t = np.arange(n) / sample_rate
    scale = evaluate_curve(profile.spectral_center_trajectory, t) / c0
    # warped time: integral of the frequency scale factor (trapezoid rule)
    warped = np.concatenate(([0.0], np.cumsum((scale[1:] + scale[:-1]) * 0.5) / sample_rate))
    envelope = evaluate_curve(profile.amplitude_envelope, t)

    out = np.empty(n)
    offsets = phases / (2 * np.pi)
    for s in range(0, n, _CHUNK):
        # phase in cycles, reduced to [-0.5, 0.5] in float64 before a float32 cosine
        arg = np.multiply.outer(warped[s : s + _CHUNK], freqs)
        arg += offsets
        arg -= np.rint(arg)
        c = np.cos((2 * np.pi * arg).astype(np.float32))
        out[s : s + _CHUNK] = c.sum(axis=1, dtype=np.float64)
    out *= amp * envelope
    if profile.drift_rate:
        out += profile.drift_rate * t / 60.0
    return ChannelSignal(muscle, out, sample_rate), GroundTruth(profile)
