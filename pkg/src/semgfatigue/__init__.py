"""Muscle-fatigue indices for surface EMG recorded from the quadriceps while running."""

from .errors import FatigueError, IoFailure, RectifiedInputError, ValidationError
from .frontend import FrontEndConfig, amplifier_gain, first_order_filter, simulate_front_end
from .indices import IndexConfig, WindowedFeatureSeries, amplitude_series, compute_series
from .signal import (
    ChannelSignal,
    Muscle,
    Surface,
    TrialMetadata,
    TrialRecording,
    Window,
    adc_to_millivolts,
    arv,
    make_windows,
    mav,
    rectify,
    rms,
)
from .spectral import SpectralEstimate, dimitrov_index, mean_frequency, median_frequency, power_spectrum
from .synth import GroundTruth, SyntheticProfile, synthesize
from .trend import FatigueReport, TrendSummary, linear_trend, percent_increase, rank_surfaces, second_wind_minimum
from .wavelets import dwt, idwt, wavelet_indices

__version__ = "0.1.0"

__all__ = [
    "FatigueError",
    "IoFailure",
    "RectifiedInputError",
    "ValidationError",
    "FrontEndConfig",
    "amplifier_gain",
    "first_order_filter",
    "simulate_front_end",
    "IndexConfig",
    "WindowedFeatureSeries",
    "amplitude_series",
    "compute_series",
    "ChannelSignal",
    "Muscle",
    "Surface",
    "TrialMetadata",
    "TrialRecording",
    "Window",
    "adc_to_millivolts",
    "arv",
    "make_windows",
    "mav",
    "rectify",
    "rms",
    "SpectralEstimate",
    "dimitrov_index",
    "mean_frequency",
    "median_frequency",
    "power_spectrum",
    "GroundTruth",
    "SyntheticProfile",
    "synthesize",
    "FatigueReport",
    "TrendSummary",
    "linear_trend",
    "percent_increase",
    "rank_surfaces",
    "second_wind_minimum",
    "dwt",
    "idwt",
    "wavelet_indices",
]
