"""Fatigue verdicts from index series: percent increase, slope, second-wind dip, surface ranking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import IncomparableReports, SeriesTooShort, ValidationError, ZeroBaseline
from .indices import WindowedFeatureSeries
from .signal import (
    MuscleLike,
    SurfaceLike,
    TrialMetadata,
    canonical_name,
    display_name,
    parse_muscle,
)

DEFAULT_HEAD = 30.0
DEFAULT_TAIL = 30.0
DEFAULT_SMOOTHING = 30.0
_EDGE_EPS = 1e-9

BASELINES = ("start", "second-wind")
AGGREGATIONS = ("majority", "mean", "per-muscle")


@dataclass(frozen=True)
class TrendSummary:
    muscle: MuscleLike
    index_name: str
    percent_increase: float
    slope: float  # index units per minute
    head_mean: float
    tail_mean: float
    head_duration: float
    tail_duration: float
    second_wind_minimum_time: float | None = None
    baseline: str = "start"


@dataclass(frozen=True)
class SurfaceRanking:
    index_name: str
    aggregation: str
    order: tuple[SurfaceLike, ...]
    per_muscle: dict[str, tuple[SurfaceLike, ...]] = field(default_factory=dict)
    scores: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class FatigueReport:
    metadata: TrialMetadata | None
    summaries: tuple[TrendSummary, ...] = ()
    surface_ranking: SurfaceRanking | None = None

    def summary(self, muscle: MuscleLike, index_name: str) -> TrendSummary:
        for s in self.summaries:
            if s.muscle == muscle and s.index_name == index_name:
                return s
        raise KeyError((display_name(muscle), index_name))

    @property
    def surface(self) -> SurfaceLike | None:
        return self.metadata.surface if self.metadata else None


def _span(series: WindowedFeatureSeries) -> float:
    return float(series.times[-1] - series.times[0]) if len(series) else 0.0


def head_tail_means(
    series: WindowedFeatureSeries,
    head_duration: float = DEFAULT_HEAD,
    tail_duration: float = DEFAULT_TAIL,
    start_time: float | None = None,
) -> tuple[float, float]:
    """Means over the first ``head_duration`` and last ``tail_duration`` seconds of window centers.

    The head interval opens at the first window center, or at ``start_time``
    when given (e.g. the second-wind minimum).
    """
    if not (head_duration > 0 and tail_duration > 0):
        raise ValidationError("head and tail durations must be positive")
    t = series.times
    if len(series) < 2:
        raise SeriesTooShort("need at least two windows")
    t0 = t[0] if start_time is None else start_time
    if t[-1] - t0 < head_duration + tail_duration - _EDGE_EPS:
        raise SeriesTooShort(
            f"series spans {t[-1] - t0:.3f} s after the baseline start, "
            f"needs {head_duration + tail_duration:.3f} s"
        )
    head = (t >= t0 - _EDGE_EPS) & (t - t0 < head_duration - _EDGE_EPS)
    tail = t[-1] - t < tail_duration - _EDGE_EPS
    if not head.any() or not tail.any():
        raise SeriesTooShort("head or tail interval holds no windows")
    head_mean = float(np.mean(series.values[head]))
    tail_mean = float(np.mean(series.values[tail]))
    if not head_mean > 0:
        raise ZeroBaseline(f"{series.index_name} head mean is {head_mean}; percent change undefined")
    return head_mean, tail_mean


def percent_increase(
    series: WindowedFeatureSeries,
    head_duration: float = DEFAULT_HEAD,
    tail_duration: float = DEFAULT_TAIL,
    start_time: float | None = None,
) -> float:
    """``(tail_mean - head_mean) / head_mean * 100`` for the trial's beginning and end."""
    head_mean, tail_mean = head_tail_means(series, head_duration, tail_duration, start_time)
    return (tail_mean - head_mean) / head_mean * 100.0


def linear_trend(series: WindowedFeatureSeries) -> float:
    """Least-squares slope of value against time, per minute."""
    if len(series) < 2:
        raise SeriesTooShort("need at least two points for a slope")
    t = series.times - series.times.mean()
    v = series.values - series.values.mean()
    return float(np.dot(t, v) / np.dot(t, t) * 60.0)


def moving_average(series: WindowedFeatureSeries, smoothing_duration: float) -> tuple[np.ndarray, np.ndarray]:
    k = max(1, int(round(smoothing_duration / series.hop_duration)))
    if k > len(series):
        raise SeriesTooShort("smoothing window longer than the series")
    kernel = np.full(k, 1.0 / k)
    return np.convolve(series.times, kernel, "valid"), np.convolve(series.values, kernel, "valid")


def second_wind_minimum(series: WindowedFeatureSeries, smoothing_duration: float = DEFAULT_SMOOTHING) -> float | None:
    """Time of the smoothed series' global minimum, or None when it sits at either end."""
    if not _span(series) > 2 * smoothing_duration:
        raise SeriesTooShort(f"series must span more than {2 * smoothing_duration} s")
    times, smooth = moving_average(series, smoothing_duration)
    i = int(np.argmin(smooth))
    if i == 0 or i == smooth.size - 1:
        return None
    if not (smooth[i] < smooth[0] and smooth[i] < smooth[-1]):
        return None
    return float(times[i])


def summarize(
    series: WindowedFeatureSeries,
    head_duration: float = DEFAULT_HEAD,
    tail_duration: float = DEFAULT_TAIL,
    smoothing_duration: float = DEFAULT_SMOOTHING,
    baseline: str = "start",
) -> TrendSummary:
    if baseline not in BASELINES:
        raise ValidationError(f"baseline must be one of {BASELINES}, got {baseline!r}")
    try:
        dip = second_wind_minimum(series, smoothing_duration)
    except SeriesTooShort:
        dip = None
    start = dip if baseline == "second-wind" and dip is not None else None
    head_mean, tail_mean = head_tail_means(series, head_duration, tail_duration, start)
    return TrendSummary(
        muscle=series.muscle,
        index_name=series.index_name,
        percent_increase=(tail_mean - head_mean) / head_mean * 100.0,
        slope=linear_trend(series),
        head_mean=head_mean,
        tail_mean=tail_mean,
        head_duration=head_duration,
        tail_duration=tail_duration,
        second_wind_minimum_time=dip,
        baseline=baseline,
    )


def build_report(
    metadata: TrialMetadata | None,
    series: Iterable[WindowedFeatureSeries],
    head_duration: float = DEFAULT_HEAD,
    tail_duration: float = DEFAULT_TAIL,
    smoothing_duration: float = DEFAULT_SMOOTHING,
    baseline: str = "start",
) -> FatigueReport:
    summaries = tuple(
        summarize(s, head_duration, tail_duration, smoothing_duration, baseline) for s in series
    )
    return FatigueReport(metadata, summaries)


def _surface_key(surface: SurfaceLike) -> str:
    return canonical_name(surface)


def _order(scores: dict[str, float], surfaces: dict[str, SurfaceLike]) -> tuple[SurfaceLike, ...]:
    keys = sorted(scores, key=lambda k: (-scores[k], k))
    return tuple(surfaces[k] for k in keys)


def rank_surfaces(
    reports: Sequence[FatigueReport],
    index_name: str = "iARV",
    aggregation: str = "majority",
    muscle: MuscleLike | None = None,
) -> SurfaceRanking:
    """Order surfaces from most to least fatiguing by percent increase.

    ``per-muscle`` ranks by one muscle (``muscle`` required), ``mean`` by the
    average over muscles, and ``majority`` by the number of pairwise majority
    wins across muscles, falling back to the mean and then the surface name on
    ties. Per-muscle orders are always returned alongside.
    """
    if aggregation not in AGGREGATIONS:
        raise ValidationError(f"aggregation must be one of {AGGREGATIONS}, got {aggregation!r}")
    if len(reports) < 2:
        raise IncomparableReports("ranking needs at least two trials")

    surfaces: dict[str, SurfaceLike] = {}
    table: dict[str, dict[str, float]] = {}  # surface -> muscle -> percent
    muscles: dict[str, MuscleLike] = {}
    for r in reports:
        if r.metadata is None:
            raise IncomparableReports("every report needs trial metadata with a surface")
        key = _surface_key(r.surface)
        if key in surfaces:
            raise IncomparableReports(f"surface {display_name(r.surface)} appears in more than one report")
        surfaces[key] = r.surface
        row = {}
        for s in r.summaries:
            if s.index_name == index_name:
                row[canonical_name(s.muscle)] = s.percent_increase
                muscles[canonical_name(s.muscle)] = s.muscle
        if not row:
            raise IncomparableReports(f"report for {display_name(r.surface)} has no {index_name} summaries")
        table[key] = row
    muscle_sets = {frozenset(row) for row in table.values()}
    if len(muscle_sets) != 1:
        raise IncomparableReports("reports cover different muscle sets")
    muscle_keys = sorted(next(iter(muscle_sets)))

    per_muscle = {
        display_name(muscles[m]): _order({s: table[s][m] for s in table}, surfaces) for m in muscle_keys
    }
    means = {s: float(np.mean([table[s][m] for m in muscle_keys])) for s in table}

    if aggregation == "per-muscle":
        if muscle is None:
            raise ValidationError("per-muscle aggregation needs a muscle")
        m = canonical_name(parse_muscle(muscle))
        if m not in muscle_keys:
            raise IncomparableReports(f"muscle {display_name(muscle)} not present in the reports")
        scores = {s: table[s][m] for s in table}
        order = _order(scores, surfaces)
    elif aggregation == "mean":
        scores = means
        order = _order(scores, surfaces)
    else:
        wins = {s: 0.0 for s in table}
        for a in table:
            for b in table:
                if a == b:
                    continue
                ahead = sum(table[a][m] > table[b][m] for m in muscle_keys)
                behind = sum(table[a][m] < table[b][m] for m in muscle_keys)
                if ahead > behind:
                    wins[a] += 1
        scores = wins
        keys = sorted(table, key=lambda k: (-wins[k], -means[k], k))
        order = tuple(surfaces[k] for k in keys)

    return SurfaceRanking(
        index_name=index_name,
        aggregation=aggregation,
        order=order,
        per_muscle=per_muscle,
        scores={display_name(surfaces[k]): v for k, v in sorted(scores.items())},
    )
