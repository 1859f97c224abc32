"""Serialisation of series, fatigue reports and surface rankings (JSON and CSV)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .fileio import OutputBatch, read_text
from .frontend import FrontEndConfig
from .indices import WindowedFeatureSeries
from .signal import (
    QUADRICEPS,
    Muscle,
    TrialMetadata,
    canonical_name,
    display_name,
    parse_muscle,
    parse_surface,
)
from .trend import FatigueReport, SurfaceRanking, TrendSummary


# ---------------------------------------------------------------- JSON


def metadata_to_dict(meta: TrialMetadata | None) -> dict | None:
    if meta is None:
        return None
    return {
        "participant_id": meta.participant_id,
        "surface": canonical_name(meta.surface),
        "distance_km": meta.distance_km,
        "ambient_temperature_c": meta.ambient_temperature_c,
        "front_end": meta.front_end.to_dict() if meta.front_end else None,
        "recorded_at": meta.recorded_at,
    }


def metadata_from_dict(data: dict | None) -> TrialMetadata | None:
    if data is None:
        return None
    try:
        front_end = data.get("front_end")
        return TrialMetadata(
            participant_id=str(data["participant_id"]),
            surface=data["surface"],
            distance_km=float(data.get("distance_km", 5.0)),
            ambient_temperature_c=data.get("ambient_temperature_c"),
            front_end=FrontEndConfig.from_dict(front_end) if front_end else None,
            recorded_at=data.get("recorded_at"),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad trial metadata {data!r}: {exc}") from None


def _summary_to_dict(s: TrendSummary) -> dict:
    return {
        "muscle": canonical_name(s.muscle),
        "index_name": s.index_name,
        "percent_increase": s.percent_increase,
        "slope": s.slope,
        "head_mean": s.head_mean,
        "tail_mean": s.tail_mean,
        "head_duration": s.head_duration,
        "tail_duration": s.tail_duration,
        "second_wind_minimum_time": s.second_wind_minimum_time,
        "baseline": s.baseline,
    }


def _summary_from_dict(d: dict) -> TrendSummary:
    return TrendSummary(**{**d, "muscle": parse_muscle(d["muscle"])})


def ranking_to_dict(r: SurfaceRanking) -> dict:
    return {
        "index_name": r.index_name,
        "aggregation": r.aggregation,
        "order": [canonical_name(s) for s in r.order],
        "per_muscle": {m: [canonical_name(s) for s in o] for m, o in r.per_muscle.items()},
        "scores": dict(r.scores),
    }


def ranking_from_dict(d: dict) -> SurfaceRanking:
    return SurfaceRanking(
        index_name=d["index_name"],
        aggregation=d["aggregation"],
        order=tuple(parse_surface(s) for s in d["order"]),
        per_muscle={m: tuple(parse_surface(s) for s in o) for m, o in d["per_muscle"].items()},
        scores=dict(d["scores"]),
    )


def report_to_dict(report: FatigueReport) -> dict:
    return {
        "metadata": metadata_to_dict(report.metadata),
        "summaries": [_summary_to_dict(s) for s in report.summaries],
        "surface_ranking": ranking_to_dict(report.surface_ranking) if report.surface_ranking else None,
    }


def report_from_dict(d: dict) -> FatigueReport:
    try:
        ranking = d.get("surface_ranking")
        return FatigueReport(
            metadata=metadata_from_dict(d.get("metadata")),
            summaries=tuple(_summary_from_dict(s) for s in d.get("summaries", [])),
            surface_ranking=ranking_from_dict(ranking) if ranking else None,
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad report document: {exc}") from None


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def report_json(report: FatigueReport) -> str:
    return dumps_json(report_to_dict(report))


def read_report(path) -> FatigueReport:
    try:
        return report_from_dict(json.loads(read_text(path)))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None


# ---------------------------------------------------------------- CSV (muscle x surface table)


def _muscle_order(muscles: Iterable) -> list:
    seen = list(dict.fromkeys(muscles))
    known = [m for m in QUADRICEPS if m in seen]
    return known + sorted((m for m in seen if m not in QUADRICEPS), key=str)


def report_table_csv(reports: FatigueReport | Sequence[FatigueReport], index_name: str = "iARV") -> str:
    """Percent increase of one index as a muscle x surface table, two decimals."""
    if isinstance(reports, FatigueReport):
        reports = [reports]
    columns = [display_name(r.surface) if r.metadata else "Trial" for r in reports]
    lines = [",".join(["Muscle"] + columns)]
    cells: dict = {}
    for col, r in enumerate(reports):
        for s in r.summaries:
            if s.index_name == index_name:
                cells[(s.muscle, col)] = s.percent_increase
    for muscle in _muscle_order(m for m, _ in cells):
        row = [display_name(muscle)]
        for col in range(len(reports)):
            v = cells.get((muscle, col))
            row.append("" if v is None else f"{v:.2f}")
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_report(
    reports: FatigueReport | Sequence[FatigueReport],
    path,
    fmt: str = "json",
    index_name: str = "iARV",
) -> Path:
    if fmt == "json":
        if isinstance(reports, FatigueReport):
            text = report_json(reports)
        else:
            text = dumps_json([report_to_dict(r) for r in reports])
    elif fmt == "csv":
        text = report_table_csv(reports, index_name)
    else:
        raise ValidationError(f"report format must be json or csv, got {fmt!r}")
    with OutputBatch() as batch:
        return batch.write_text(path, text)


def ranking_text(ranking: SurfaceRanking, fmt: str = "json") -> str:
    if fmt == "json":
        return dumps_json(ranking_to_dict(ranking))
    if fmt == "csv":
        lines = ["rank,surface,score"]
        for i, s in enumerate(ranking.order, 1):
            lines.append(f"{i},{display_name(s)},{ranking.scores.get(display_name(s), float('nan')):.2f}")
        return "\n".join(lines) + "\n"
    raise ValidationError(f"ranking format must be json or csv, got {fmt!r}")


# ---------------------------------------------------------------- series files


def _column(muscle) -> str:
    return muscle.column if isinstance(muscle, Muscle) else str(muscle)


def series_csv(series: Sequence[WindowedFeatureSeries]) -> str:
    """All channels of one index on a shared time axis: ``time_s,<muscle>...``."""
    if not series:
        raise ValidationError("no series to write")
    first = series[0]
    for s in series[1:]:
        if s.index_name != first.index_name or not np.array_equal(s.times, first.times):
            raise ValidationError("series in one file must share index and time axis")
    header = ["time_s"] + [_column(s.muscle) for s in series]
    lines = [",".join(header)]
    cols = [first.times] + [s.values for s in series]
    for row in zip(*cols):
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def read_series_csv(
    path, index_name: str, window_duration: float, hop_duration: float, label: str = ""
) -> list[WindowedFeatureSeries]:
    text = read_text(path)
    lines = text.splitlines()
    if not lines or not lines[0].startswith("time_s,"):
        raise ValidationError(f"{path}:1: expected a time_s,<muscle>... header")
    header = lines[0].split(",")
    try:
        data = np.array([[float(v) for v in line.split(",")] for line in lines[1:] if line])
    except ValueError as exc:
        raise ValidationError(f"{path}: bad numeric value ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ValidationError(f"{path}: rows do not match the header")
    return [
        WindowedFeatureSeries(index_name, parse_muscle(name), data[:, 0], data[:, j + 1],
                              window_duration, hop_duration, label)
        for j, name in enumerate(header[1:])
    ]
