"""Per-window fatigue index series for whole recordings.

Amplitude indices (iARV, iMAV, iRMS) use short windows; spectral (iMNF, iMDF,
FInsm5) and wavelet (WIRM*) indices use longer overlapping windows because a
0.2 s window only resolves 5 Hz.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import spectral, wavelets
from .errors import ValidationError
from .signal import (
    DEFAULT_HOP,
    DEFAULT_WINDOW,
    ChannelSignal,
    MuscleLike,
    TrialRecording,
    arv,
    display_name,
    make_windows,
    mav,
    rectify,
    rms,
)

AMPLITUDE_INDICES = ("iARV", "iMAV", "iRMS")
SPECTRAL_INDICES = ("iMNF", "iMDF", "FInsm5")
WAVELET_INDICES = ("WIRM1551", "WIRM1M51", "WIRM1522")
ALL_INDICES = AMPLITUDE_INDICES + SPECTRAL_INDICES + WAVELET_INDICES

_AMPLITUDE_FN: dict[str, Callable] = {"iARV": arv, "iMAV": mav, "iRMS": rms}


@dataclass(frozen=True, eq=False)
class WindowedFeatureSeries:
    index_name: str
    muscle: MuscleLike
    times: np.ndarray  # window centers, seconds
    values: np.ndarray
    window_duration: float
    hop_duration: float
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if t.shape != v.shape or t.ndim != 1:
            raise ValidationError("times and values must be 1-D and of equal length")
        if np.any(np.diff(t) <= 0):
            raise ValidationError("series times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size

    def scaled(self, factor: float) -> "WindowedFeatureSeries":
        return WindowedFeatureSeries(
            self.index_name, self.muscle, self.times, self.values * factor,
            self.window_duration, self.hop_duration, self.label,
        )


@dataclass(frozen=True)
class IndexConfig:
    amplitude_window: float = DEFAULT_WINDOW
    amplitude_hop: float = DEFAULT_HOP
    spectral_window: float = spectral.DEFAULT_SPECTRAL_WINDOW
    spectral_hop: float = spectral.DEFAULT_SPECTRAL_HOP
    dimitrov_orders: tuple[float, float] = (-1.0, 5.0)
    wavelet_family: str = wavelets.DEFAULT_FAMILY
    wavelet_levels: int = wavelets.DEFAULT_LEVELS
    wavelet_ratios: Mapping[str, wavelets.WaveletRatio] = field(
        default_factory=lambda: dict(wavelets.DEFAULT_WAVELET_RATIOS)
    )

    def validate(self) -> "IndexConfig":
        for name in ("amplitude_window", "amplitude_hop", "spectral_window", "spectral_hop"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if self.wavelet_family not in wavelets.SCALING_FILTERS:
            raise ValidationError(f"unknown wavelet family {self.wavelet_family!r}")
        return self


def _centers(windows) -> np.ndarray:
    return np.array([w.center_time for w in windows])


def _series(name, channel, windows, values, window, hop, label) -> WindowedFeatureSeries:
    return WindowedFeatureSeries(name, channel.muscle, _centers(windows), np.asarray(values, float), window, hop, label)


def channel_amplitude_series(
    channel: ChannelSignal,
    index: str = "iARV",
    window: float = DEFAULT_WINDOW,
    hop: float = DEFAULT_HOP,
    label: str = "",
) -> WindowedFeatureSeries:
    try:
        fn = _AMPLITUDE_FN[index]
    except KeyError:
        raise ValidationError(f"{index!r} is not an amplitude index") from None
    if not channel.rectified:
        channel = rectify(channel)
    windows = make_windows(channel, window, hop)
    return _series(index, channel, windows, [fn(w) for w in windows], window, hop, label)


def amplitude_series(
    recording: TrialRecording,
    index: str = "iARV",
    window: float = DEFAULT_WINDOW,
    hop: float = DEFAULT_HOP,
) -> list[WindowedFeatureSeries]:
    """One amplitude-index series per channel; unrectified data is rectified first."""
    label = _label(recording)
    return [channel_amplitude_series(c, index, window, hop, label) for c in recording.channels]


def channel_spectral_series(
    channel: ChannelSignal,
    indices: Sequence[str] = SPECTRAL_INDICES,
    window: float = spectral.DEFAULT_SPECTRAL_WINDOW,
    hop: float = spectral.DEFAULT_SPECTRAL_HOP,
    dimitrov_orders: tuple[float, float] = (-1.0, 5.0),
    label: str = "",
) -> dict[str, WindowedFeatureSeries]:
    windows = make_windows(channel, window, hop)
    out: dict[str, list[float]] = {name: [] for name in indices}
    for w in windows:
        est = spectral.power_spectrum(w)
        for name in indices:
            if name == "iMNF":
                out[name].append(spectral.mean_frequency(est))
            elif name == "iMDF":
                out[name].append(spectral.median_frequency(est))
            elif name == "FInsm5":
                out[name].append(spectral.dimitrov_index(est, *dimitrov_orders))
            else:
                raise ValidationError(f"{name!r} is not a spectral index")
    return {name: _series(name, channel, windows, vals, window, hop, label) for name, vals in out.items()}


def channel_wavelet_series(
    channel: ChannelSignal,
    indices: Sequence[str] = WAVELET_INDICES,
    window: float = spectral.DEFAULT_SPECTRAL_WINDOW,
    hop: float = spectral.DEFAULT_SPECTRAL_HOP,
    family: str = wavelets.DEFAULT_FAMILY,
    levels: int = wavelets.DEFAULT_LEVELS,
    ratios: Mapping[str, wavelets.WaveletRatio] | None = None,
    label: str = "",
) -> dict[str, WindowedFeatureSeries]:
    ratios = ratios or wavelets.DEFAULT_WAVELET_RATIOS
    missing = [name for name in indices if name not in ratios]
    if missing:
        raise ValidationError(f"no wavelet ratio definition for {missing}")
    chosen = {name: ratios[name] for name in indices}
    windows = make_windows(channel, window, hop)
    out: dict[str, list[float]] = {name: [] for name in indices}
    for w in windows:
        for name, value in wavelets.wavelet_indices(w, None, family, levels, chosen).items():
            out[name].append(value)
    return {name: _series(name, channel, windows, vals, window, hop, label) for name, vals in out.items()}


def _label(recording: TrialRecording) -> str:
    return display_name(recording.metadata.surface) if recording.metadata else ""


def compute_series(
    recording: TrialRecording,
    indices: Iterable[str] = ("iARV",),
    config: IndexConfig | None = None,
) -> list[WindowedFeatureSeries]:
    """Every requested index for every channel, ordered by index then channel."""
    config = (config or IndexConfig()).validate()
    indices = list(dict.fromkeys(indices))
    unknown = [i for i in indices if i not in ALL_INDICES]
    if unknown:
        raise ValidationError(f"unknown indices {unknown}; known: {list(ALL_INDICES)}")
    label = _label(recording)
    spec_names = [i for i in indices if i in SPECTRAL_INDICES]
    wav_names = [i for i in indices if i in WAVELET_INDICES]

    per_channel: dict[int, dict[str, WindowedFeatureSeries]] = {}
    for ci, channel in enumerate(recording.channels):
        found: dict[str, WindowedFeatureSeries] = {}
        for name in indices:
            if name in AMPLITUDE_INDICES:
                found[name] = channel_amplitude_series(
                    channel, name, config.amplitude_window, config.amplitude_hop, label
                )
        if spec_names:
            found.update(channel_spectral_series(
                channel, spec_names, config.spectral_window, config.spectral_hop,
                config.dimitrov_orders, label,
            ))
        if wav_names:
            found.update(channel_wavelet_series(
                channel, wav_names, config.spectral_window, config.spectral_hop,
                config.wavelet_family, config.wavelet_levels, config.wavelet_ratios, label,
            ))
        per_channel[ci] = found
    return [per_channel[ci][name] for name in indices for ci in range(len(recording.channels))]
