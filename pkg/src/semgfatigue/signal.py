"""Sampled sEMG containers, windowing and the amplitude primitives.

Samples are float64 millivolts. Every function here is pure; arrays handed
out by :class:`ChannelSignal` and :class:`Window` are read-only views.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Sequence, Union

import numpy as np

from .errors import CountOutOfRange, ValidationError, WindowTooLong

if TYPE_CHECKING:
    from .frontend import FrontEndConfig

DEFAULT_SAMPLE_RATE = 1000.0
DEFAULT_WINDOW = 0.2
DEFAULT_HOP = 0.2


class Muscle(str, enum.Enum):
    VASTUS_MEDIALIS = "VastusMedialis"
    RECTUS_FEMORIS = "RectusFemoris"
    VASTUS_LATERALIS = "VastusLateralis"

    @property
    def display(self) -> str:
        return _MUSCLE_DISPLAY[self]

    @property
    def column(self) -> str:
        return _MUSCLE_COLUMN[self]


_MUSCLE_DISPLAY = {
    Muscle.VASTUS_MEDIALIS: "Vastus Medialis",
    Muscle.RECTUS_FEMORIS: "Rectus Femoris",
    Muscle.VASTUS_LATERALIS: "Vastus Lateralis",
}
_MUSCLE_COLUMN = {
    Muscle.VASTUS_MEDIALIS: "vm",
    Muscle.RECTUS_FEMORIS: "rf",
    Muscle.VASTUS_LATERALIS: "vl",
}
QUADRICEPS = (Muscle.VASTUS_MEDIALIS, Muscle.RECTUS_FEMORIS, Muscle.VASTUS_LATERALIS)

# Anything that is not one of the three quadriceps heads is carried as a plain name.
MuscleLike = Union[Muscle, str]


class Surface(str, enum.Enum):
    ASPHALT = "Asphalt"
    SAND = "Sand"
    ATHLETICS_TRACK = "AthleticsTrack"

    @property
    def display(self) -> str:
        return "Athletics Track" if self is Surface.ATHLETICS_TRACK else self.value


SurfaceLike = Union[Surface, str]


def _lookup(enum_cls, value: str):
    key = value.replace(" ", "").replace("_", "").lower()
    for member in enum_cls:
        if member.value.lower() == key or member.name.replace("_", "").lower() == key:
            return member
    return None


def parse_muscle(value: MuscleLike) -> MuscleLike:
    """Map a name, column code or display label to :class:`Muscle`; unknown names pass through."""
    if isinstance(value, Muscle):
        return value
    for m in Muscle:
        if value == m.column:
            return m
    return _lookup(Muscle, value) or value


def parse_surface(value: SurfaceLike) -> SurfaceLike:
    if isinstance(value, Surface):
        return value
    return _lookup(Surface, value) or value


def display_name(value: MuscleLike | SurfaceLike) -> str:
    return value.display if isinstance(value, (Muscle, Surface)) else str(value)


def canonical_name(value: MuscleLike | SurfaceLike) -> str:
    return value.value if isinstance(value, enum.Enum) else str(value)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ChannelSignal:
    """One channel of sampled sEMG in millivolts."""

    muscle: MuscleLike
    samples: np.ndarray
    sample_rate: float = DEFAULT_SAMPLE_RATE
    rectified: bool = False

    def __post_init__(self):
        samples = _frozen(self.samples)
        if samples.ndim != 1 or samples.size < 1:
            raise ValidationError("a channel needs a 1-D array of at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValidationError(f"channel {display_name(self.muscle)} contains non-finite samples")
        if not self.sample_rate > 0:
            raise ValidationError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.rectified and np.any(samples < 0):
            raise ValidationError("channel is flagged rectified but has negative samples")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "muscle", parse_muscle(self.muscle))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate

    def replace_samples(self, samples, rectified: bool | None = None) -> "ChannelSignal":
        return ChannelSignal(
            self.muscle,
            samples,
            self.sample_rate,
            self.rectified if rectified is None else rectified,
        )


@dataclass(frozen=True)
class TrialMetadata:
    participant_id: str
    surface: SurfaceLike
    distance_km: float = 5.0
    ambient_temperature_c: float | None = None
    front_end: "FrontEndConfig | None" = None
    recorded_at: str | None = None

    def __post_init__(self):
        if not self.distance_km > 0:
            raise ValidationError(f"distance_km must be positive, got {self.distance_km}")
        object.__setattr__(self, "surface", parse_surface(self.surface))


@dataclass(frozen=True, eq=False)
class TrialRecording:
    """Synchronised channels of one running trial."""

    sample_rate: float
    channels: tuple[ChannelSignal, ...]
    rectified: bool = False
    metadata: TrialMetadata | None = None
    start_time: float = 0.0

    def __post_init__(self):
        channels = tuple(self.channels)
        if not self.sample_rate > 0:
            raise ValidationError(f"sample_rate must be positive, got {self.sample_rate}")
        if not channels:
            raise ValidationError("a recording needs at least one channel")
        if len({len(c) for c in channels}) != 1:
            raise ValidationError("all channels must have the same number of samples")
        for c in channels:
            if c.sample_rate != self.sample_rate:
                raise ValidationError("channel sample rate differs from recording sample rate")
            if self.rectified and np.any(c.samples < 0):
                raise ValidationError("recording is flagged rectified but has negative samples")
        object.__setattr__(self, "channels", channels)

    @property
    def n_samples(self) -> int:
        return len(self.channels[0])

    def channel(self, muscle: MuscleLike) -> ChannelSignal:
        muscle = parse_muscle(muscle)
        for c in self.channels:
            if c.muscle == muscle:
                return c
        raise KeyError(display_name(muscle))


@dataclass(frozen=True, eq=False)
class Window:
    start_index: int
    length: int
    values: np.ndarray
    sample_rate: float = DEFAULT_SAMPLE_RATE
    rectified: bool = False

    def __post_init__(self):
        if self.length < 1 or self.values.size != self.length:
            raise ValidationError("window length must be >= 1 and match its values")

    @property
    def center_time(self) -> float:
        return (self.start_index + self.length / 2) / self.sample_rate


def as_window(x, sample_rate: float = DEFAULT_SAMPLE_RATE, rectified: bool = False) -> Window:
    """Wrap a bare array (or pass a Window through) so primitives accept either."""
    if isinstance(x, Window):
        return x
    values = np.asarray(x, dtype=np.float64)
    if values.ndim != 1 or values.size < 1:
        raise ValidationError("window must be a non-empty 1-D sequence")
    return Window(0, values.size, values, sample_rate, rectified)


def rectify(signal: ChannelSignal) -> ChannelSignal:
    """Full-wave rectification, ``|x|`` sample by sample."""
    return signal.replace_samples(np.abs(signal.samples), rectified=True)


def window_starts(n_samples: int, window_len: int, hop_len: int) -> np.ndarray:
    if window_len > n_samples:
        raise WindowTooLong(f"window of {window_len} samples exceeds signal of {n_samples} samples")
    return np.arange(0, n_samples - window_len + 1, hop_len)


def duration_to_samples(duration: float, sample_rate: float) -> int:
    n = int(round(duration * sample_rate))
    if n < 1:
        raise ValidationError(f"duration {duration} s is shorter than one sample at {sample_rate} Hz")
    return n


def make_windows(
    signal: ChannelSignal,
    window_duration: float = DEFAULT_WINDOW,
    hop_duration: float = DEFAULT_HOP,
) -> list[Window]:
    """Cut ``signal`` into windows starting every ``hop_duration`` seconds.

    A trailing window that would run past the end is dropped, so every window
    has exactly ``round(window_duration * sample_rate)`` samples.
    """
    if not (window_duration > 0 and hop_duration > 0):
        raise ValidationError("window and hop durations must be positive")
    n = duration_to_samples(window_duration, signal.sample_rate)
    hop = duration_to_samples(hop_duration, signal.sample_rate)
    return [
        Window(int(s), n, signal.samples[s : s + n], signal.sample_rate, signal.rectified)
        for s in window_starts(len(signal), n, hop)
    ]


def iter_window_arrays(samples: np.ndarray, window_len: int, hop_len: int) -> Iterator[np.ndarray]:
    for s in window_starts(samples.size, window_len, hop_len):
        yield samples[s : s + window_len]


def _values(window) -> np.ndarray:
    return window.values if isinstance(window, Window) else as_window(window).values


def arv(window) -> float:
    """Average rectified value, ``(1/n) * sum(|x_n|)``."""
    x = _values(window)
    return float(np.abs(x).sum()) / x.size


def mav(window) -> float:
    """Mean absolute value. Identical to :func:`arv`; kept as its own index name."""
    return arv(window)


def rms(window) -> float:
    x = _values(window)
    ms = float(np.dot(x, x)) / x.size
    if np.isfinite(ms) and ms > 1e-290:
        return math.sqrt(ms)
    # squares under- or overflowed: rescale by the peak first
    scale = float(np.max(np.abs(x)))
    if scale == 0.0:
        return 0.0
    y = x / scale
    return scale * math.sqrt(float(np.dot(y, y)) / y.size)


def adc_to_millivolts(
    counts: Sequence[int],
    resolution_bits: int = 10,
    reference_volts: float = 5.0,
    gain: float = 1.0,
    offset_counts: int = 0,
    muscle: MuscleLike = "Other",
    sample_rate: float = DEFAULT_SAMPLE_RATE,
    rectified: bool = False,
) -> ChannelSignal:
    """Convert raw ADC codes to electrode-referred millivolts.

    ``value_mV = (count - offset_counts) * (reference_volts * 1000 / (2**bits - 1)) / gain``.
    ``offset_counts`` is zero for the rectifying front end; a bipolar front end
    biased at mid-scale passes ``2**(bits - 1)``.
    """
    if not 8 <= resolution_bits <= 24:
        raise ValidationError(f"resolution_bits must be in [8, 24], got {resolution_bits}")
    if not gain > 0:
        raise ValidationError(f"gain must be positive, got {gain}")
    codes = np.asarray(counts, dtype=np.int64)
    full_scale = 2**resolution_bits
    bad = np.flatnonzero((codes < 0) | (codes >= full_scale))
    if bad.size:
        raise CountOutOfRange(
            f"count {int(codes[bad[0]])} at position {int(bad[0])} outside [0, {full_scale - 1}]"
        )
    lsb_mv = reference_volts * 1000.0 / (full_scale - 1)
    values = (codes - offset_counts) * lsb_mv / gain
    return ChannelSignal(muscle, values, sample_rate, rectified)
