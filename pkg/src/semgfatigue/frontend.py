"""Digital model of the analog acquisition board.

Chain (fixed order): instrumentation amplifier -> first-order HPF -> first-order
LPF -> full-wave rectifier (optional) -> ADC quantisation with saturation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import CutoffOutOfRange, InvalidConfig, NonPositiveResistor
from .signal import ChannelSignal

GAIN_RESISTOR_CONSTANT = 49_400.0  # ohms


@dataclass(frozen=True)
class FrontEndConfig:
    gain_resistor_ohms: float = 100.0
    hpf_cutoff: float = 20.0
    lpf_cutoff: float = 450.0
    rectifier_enabled: bool = True
    adc_bits: int = 10
    adc_reference: float = 5.0
    supply: float = 3.75  # +/- volts, informational only

    def validate(self, sample_rate: float) -> "FrontEndConfig":
        if not self.gain_resistor_ohms > 0:
            raise NonPositiveResistor(f"gain resistor must be positive, got {self.gain_resistor_ohms}")
        if not 0 < self.hpf_cutoff < self.lpf_cutoff < sample_rate / 2:
            raise InvalidConfig(
                f"need 0 < hpf ({self.hpf_cutoff}) < lpf ({self.lpf_cutoff}) < Nyquist ({sample_rate / 2})"
            )
        if not 8 <= self.adc_bits <= 24:
            raise InvalidConfig(f"adc_bits must be in [8, 24], got {self.adc_bits}")
        if not self.adc_reference > 0:
            raise InvalidConfig("adc_reference must be positive")
        return self

    @property
    def gain(self) -> float:
        return amplifier_gain(self.gain_resistor_ohms)

    @property
    def full_scale(self) -> int:
        return 2**self.adc_bits - 1

    @property
    def lsb_mv(self) -> float:
        return self.adc_reference * 1000.0 / self.full_scale

    @property
    def offset_counts(self) -> int:
        """Mid-scale bias used when the rectifier is bypassed (bipolar signal)."""
        return 0 if self.rectifier_enabled else 2 ** (self.adc_bits - 1)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict | None) -> "FrontEndConfig":
        if not data:
            return cls()
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidConfig(f"unknown front_end keys: {sorted(unknown)}")
        return cls(**data)


def amplifier_gain(r_g: float) -> float:
    """Instrumentation-amplifier gain ``1 + 49.4 kOhm / R_G``."""
    if not r_g > 0:
        raise NonPositiveResistor(f"R_G must be positive, got {r_g}")
    return 1.0 + GAIN_RESISTOR_CONSTANT / r_g


def first_order_coefficients(cutoff: float, kind: str, sample_rate: float) -> tuple[np.ndarray, np.ndarray]:
    """Bilinear-transform coefficients of a one-pole filter, pre-warped at ``cutoff``."""
    if not 0 < cutoff < sample_rate / 2:
        raise CutoffOutOfRange(f"cutoff {cutoff} Hz outside (0, {sample_rate / 2}) Hz")
    k = math.tan(math.pi * cutoff / sample_rate)
    a = np.array([1.0, (k - 1.0) / (k + 1.0)])
    if kind == "lowpass":
        b = np.array([k, k]) / (k + 1.0)
    elif kind == "highpass":
        b = np.array([1.0, -1.0]) / (k + 1.0)
    else:
        raise ValueError(f"kind must be 'lowpass' or 'highpass', got {kind!r}")
    return b, a


def first_order_filter(signal, cutoff: float, kind: str, sample_rate: float) -> np.ndarray:
    b, a = first_order_coefficients(cutoff, kind, sample_rate)
    return lfilter(b, a, np.asarray(signal, dtype=np.float64))


def magnitude_response(cutoff: float, kind: str, sample_rate: float, freqs) -> np.ndarray:
    """|H(e^jw)| of the digital filter at ``freqs`` (Hz)."""
    b, a = first_order_coefficients(cutoff, kind, sample_rate)
    z = np.exp(-2j * np.pi * np.asarray(freqs, dtype=float) / sample_rate)
    return np.abs((b[0] + b[1] * z) / (a[0] + a[1] * z))


def apply_perspiration_drift(signal, drift_rate: float, sample_rate: float | None = None):
    """Add a baseline that grows by ``drift_rate`` mV every minute.

    Accepts a :class:`ChannelSignal` (returned as one) or a bare array, in which
    case ``sample_rate`` is required.
    """
    if isinstance(signal, ChannelSignal):
        t = signal.times
        return signal.replace_samples(signal.samples + drift_rate * t / 60.0)
    x = np.asarray(signal, dtype=np.float64)
    if sample_rate is None:
        raise ValueError("sample_rate is required for array input")
    return x + drift_rate * (np.arange(x.size) / sample_rate) / 60.0


def quantize(values_mv: np.ndarray, config: FrontEndConfig) -> np.ndarray:
    """ADC codes for amplified millivolts; saturates at the rails."""
    codes = np.rint(values_mv / config.lsb_mv) + config.offset_counts
    return np.clip(codes, 0, config.full_scale).astype(np.int64)


def simulate_front_end(
    raw: ChannelSignal,
    config: FrontEndConfig | None = None,
    sample_rate: float | None = None,
    drift_rate: float = 0.0,
) -> ChannelSignal:
    """Run electrode-level millivolts through the board model.

    Returns amplified millivolts as seen at the ADC input after quantisation.
    ``drift_rate`` (electrode-referred mV/minute) adds the sweat-induced
    offset at the board output, ahead of the converter.
    """
    config = config or FrontEndConfig()
    fs = sample_rate or raw.sample_rate
    config.validate(fs)
    x = raw.samples * config.gain
    x = first_order_filter(x, config.hpf_cutoff, "highpass", fs)
    x = first_order_filter(x, config.lpf_cutoff, "lowpass", fs)
    if config.rectifier_enabled:
        x = np.abs(x)
    if drift_rate:
        x = apply_perspiration_drift(x, drift_rate * config.gain, fs)
    codes = quantize(x, config)
    out = (codes - config.offset_counts) * config.lsb_mv
    return ChannelSignal(raw.muscle, out, fs, rectified=config.rectifier_enabled)
