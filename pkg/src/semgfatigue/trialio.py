"""Trial CSV format.

One header line ``time_ms,vm,rf,vl`` followed by one row per sample: the
integer millisecond timestamp and the three raw ADC codes (Vastus Medialis,
Rectus Femoris, Vastus Lateralis). Codes are turned into electrode-referred
millivolts with the front-end configuration of the trial.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import (
    CountOutOfRange,
    MalformedHeader,
    NonMonotoneTimestamps,
    TrialFormatError,
    TruncatedRow,
    ValidationError,
)
from .fileio import OutputBatch, read_text
from .frontend import FrontEndConfig
from .signal import (
    DEFAULT_SAMPLE_RATE,
    QUADRICEPS,
    TrialMetadata,
    TrialRecording,
    adc_to_millivolts,
)

HEADER = "time_ms,vm,rf,vl"
_COLUMNS = 4
MAX_SAMPLE_RATE = 1000.0  # integer-millisecond timestamps


def _check_rate(sample_rate: float) -> None:
    if not 0 < sample_rate <= MAX_SAMPLE_RATE:
        raise ValidationError(
            f"trial CSV timestamps are whole milliseconds; sample rate must be in (0, {MAX_SAMPLE_RATE:g}] Hz"
        )


def _scan_rows(lines: list[str], path: str) -> np.ndarray:
    """Slow path: parse row by row so the first bad line can be reported."""
    out = np.empty((len(lines), _COLUMNS), dtype=np.int64)
    for i, line in enumerate(lines):
        lineno = i + 2
        fields = line.split(",")
        if len(fields) < _COLUMNS:
            raise TruncatedRow(f"expected {_COLUMNS} fields, found {len(fields)}", path, lineno)
        if len(fields) > _COLUMNS:
            raise TrialFormatError(f"expected {_COLUMNS} fields, found {len(fields)}", path, lineno)
        try:
            out[i] = [int(f) for f in fields]
        except ValueError:
            raise TrialFormatError(f"non-integer field in {line!r}", path, lineno) from None
    return out


def _parse_rows(lines: list[str], path: str) -> np.ndarray:
    if any(line.count(",") != _COLUMNS - 1 for line in lines):
        return _scan_rows(lines, path)
    try:
        flat = np.array(",".join(lines).split(","))
        return flat.astype(np.int64).reshape(-1, _COLUMNS)
    except ValueError:
        return _scan_rows(lines, path)


def parse_trial_csv(
    path,
    front_end: FrontEndConfig | None = None,
    sample_rate: float = DEFAULT_SAMPLE_RATE,
    metadata: TrialMetadata | None = None,
    rectified: bool | None = None,
) -> TrialRecording:
    front_end = front_end or (metadata.front_end if metadata and metadata.front_end else FrontEndConfig())
    rectified = front_end.rectifier_enabled if rectified is None else rectified
    _check_rate(sample_rate)
    name = str(path)
    text = read_text(path)
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        found = lines[0] if lines else "<empty file>"
        raise MalformedHeader(f"expected header {HEADER!r}, found {found!r}", name, 1)
    body = lines[1:]
    while body and not body[-1].strip():
        body.pop()
    if not body:
        raise TruncatedRow("no sample rows after the header", name, 2)

    rows = _parse_rows(body, name)
    times = rows[:, 0]
    period_ms = 1000.0 / sample_rate
    expected = times[0] + np.rint(np.arange(times.size) * period_ms)
    step_bad = np.flatnonzero(np.diff(times) <= 0)
    drift_bad = np.flatnonzero(np.abs(times - expected) > max(1.0, period_ms / 2))
    if step_bad.size or drift_bad.size:
        i = min(
            int(step_bad[0]) + 1 if step_bad.size else times.size,
            int(drift_bad[0]) if drift_bad.size else times.size,
        )
        raise NonMonotoneTimestamps(
            f"timestamp {int(times[i])} ms breaks the {period_ms:g} ms sample period",
            name,
            i + 2,
        )

    full_scale = 2**front_end.adc_bits
    codes = rows[:, 1:]
    bad = np.argwhere((codes < 0) | (codes >= full_scale))
    if bad.size:
        r, c = bad[0]
        raise CountOutOfRange(
            f"count {int(codes[r, c])} outside [0, {full_scale - 1}]", name, int(r) + 2
        )

    channels = tuple(
        adc_to_millivolts(
            codes[:, j],
            front_end.adc_bits,
            front_end.adc_reference,
            front_end.gain,
            front_end.offset_counts,
            muscle=muscle,
            sample_rate=sample_rate,
            rectified=rectified,
        )
        for j, muscle in enumerate(QUADRICEPS)
    )
    return TrialRecording(
        sample_rate=sample_rate,
        channels=channels,
        rectified=rectified,
        metadata=metadata,
        start_time=float(times[0]) / 1000.0,
    )


def recording_counts(recording: TrialRecording, front_end: FrontEndConfig) -> np.ndarray:
    """ADC codes (n_samples x 3) that reproduce the recording's millivolt values."""
    scale = front_end.gain / front_end.lsb_mv
    cols = []
    for muscle in QUADRICEPS:
        mv = recording.channel(muscle).samples
        cols.append(np.rint(mv * scale).astype(np.int64) + front_end.offset_counts)
    return np.column_stack(cols)


def format_trial_csv(times_ms: np.ndarray, counts: np.ndarray) -> str:
    cols = [np.asarray(times_ms, dtype=np.int64).astype(str)] + [
        counts[:, j].astype(str) for j in range(counts.shape[1])
    ]
    rows = map(",".join, zip(*cols))
    return HEADER + "\n" + "\n".join(rows) + "\n"


def trial_times_ms(n_samples: int, sample_rate: float, start_ms: int = 0) -> np.ndarray:
    _check_rate(sample_rate)
    return start_ms + np.rint(np.arange(n_samples) * (1000.0 / sample_rate)).astype(np.int64)


def write_trial_csv(recording: TrialRecording, path, front_end: FrontEndConfig | None = None) -> Path:
    """Write the canonical CSV for ``recording``; the inverse of :func:`parse_trial_csv`."""
    front_end = front_end or (
        recording.metadata.front_end
        if recording.metadata and recording.metadata.front_end
        else FrontEndConfig()
    )
    times = trial_times_ms(recording.n_samples, recording.sample_rate, int(round(recording.start_time * 1000)))
    text = format_trial_csv(times, recording_counts(recording, front_end))
    with OutputBatch() as batch:
        return batch.write_text(path, text)
