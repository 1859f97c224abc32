"""Command-line interface: ``semg-fatigue simulate | analyze | report | compare``.

Exit status: 0 success, 1 validation or usage error, 2 file error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np
import yaml

from .errors import FatigueError, InvalidConfig, InvalidProfile, ValidationError
from .fileio import OutputBatch, read_text
from .frontend import FrontEndConfig, simulate_front_end
from .indices import compute_series
from .manifest import RunManifest, TrialEntry, load_manifest, single_trial_manifest
from .plot import plot_data_csv, render_svg
from .reports import (
    dumps_json,
    metadata_from_dict,
    metadata_to_dict,
    ranking_text,
    read_report,
    read_series_csv,
    report_json,
    report_table_csv,
    report_to_dict,
    series_csv,
)
from .signal import DEFAULT_SAMPLE_RATE, QUADRICEPS, TrialMetadata, display_name
from .synth import SyntheticProfile, synthesize
from .trend import AGGREGATIONS, BASELINES, FatigueReport, build_report, rank_surfaces
from .trialio import format_trial_csv, parse_trial_csv, trial_times_ms

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2
SERIES_INDEX = "series_index.json"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------- simulate


def load_profile_doc(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        data = yaml.safe_load(read_text(path)) or {}
    except yaml.YAMLError:
        raise InvalidProfile(f"{path}: invalid YAML") from None
    if not isinstance(data, dict):
        raise InvalidProfile(f"{path}: profile must be a mapping")
    return data


def channel_seed(seed: int, channel: int) -> int:
    return int(np.random.SeedSequence([seed, channel]).generate_state(1)[0])


def simulate_trial(doc: dict, seed: int) -> tuple[str, dict, TrialMetadata, float]:
    """Synthesize, run through the front end, and render the trial CSV text."""
    fs = float(doc.get("sample_rate", DEFAULT_SAMPLE_RATE))
    front_end = FrontEndConfig.from_dict(doc.get("front_end")).validate(fs)
    meta_doc = dict(doc.get("metadata") or {"participant_id": "synthetic", "surface": "Other"})
    meta_doc["front_end"] = front_end.to_dict()
    metadata = metadata_from_dict(meta_doc)
    base = dict(doc.get("profile") or {})
    if "duration" not in base:
        raise InvalidProfile("profile.duration is required")
    overrides = doc.get("channels") or {}

    codes, truth = [], {}
    for j, muscle in enumerate(QUADRICEPS):
        spec = {**base, **(overrides.get(muscle.column) or {})}
        spec["noise_seed"] = channel_seed(seed, j)
        spec.setdefault("hpf_cutoff", front_end.hpf_cutoff)
        spec.setdefault("lpf_cutoff", front_end.lpf_cutoff)
        profile = SyntheticProfile.from_dict(spec)
        raw, _ = synthesize(replace(profile, drift_rate=0.0), fs, muscle)
        out = simulate_front_end(raw, front_end, fs, drift_rate=profile.drift_rate)
        codes.append(np.rint(out.samples / front_end.lsb_mv).astype(np.int64) + front_end.offset_counts)
        truth[muscle.column] = profile.to_dict()
    counts = np.column_stack(codes)
    text = format_trial_csv(trial_times_ms(counts.shape[0], fs), counts)
    sidecar = {
        "seed": seed,
        "sample_rate": fs,
        "metadata": metadata_to_dict(metadata),
        "cascade": ["amplifier", "highpass", "lowpass", "rectifier" if front_end.rectifier_enabled else "bypass", "adc"],
        "channels": truth,
    }
    return text, sidecar, metadata, fs


def cmd_simulate(args) -> int:
    doc = load_profile_doc(args.profile)
    if args.surface:
        doc.setdefault("metadata", {})["surface"] = args.surface
        doc["metadata"].setdefault("participant_id", "synthetic")
    if args.duration is not None:
        doc.setdefault("profile", {})["duration"] = args.duration
    seed = args.seed if args.seed is not None else int(doc.get("seed", 0))
    text, sidecar, metadata, fs = simulate_trial(doc, seed)

    out = Path(args.out)
    truth_path = out.with_name(out.stem + ".truth.json")
    manifest_path = out.with_name(out.stem + ".manifest.yaml")
    with OutputBatch() as batch:
        batch.write_text(out, text)
        batch.write_text(truth_path, dumps_json(sidecar))
        batch.write_text(manifest_path, single_trial_manifest(out.name, metadata, fs))
    print(f"wrote {out}, {truth_path.name}, {manifest_path.name}")
    return EXIT_OK


# ---------------------------------------------------------------- analyze


def analyze_trial(entry: TrialEntry, manifest: RunManifest) -> tuple[FatigueReport, list]:
    recording = parse_trial_csv(entry.path, entry.front_end, entry.sample_rate, entry.metadata)
    series = compute_series(recording, manifest.indices, manifest.index_config)
    t = manifest.trend
    report = build_report(entry.metadata, series, t.head, t.tail, t.smoothing, t.baseline)
    return report, series


def _windows_for(index: str, manifest: RunManifest) -> tuple[float, float]:
    cfg = manifest.index_config
    if index in ("iARV", "iMAV", "iRMS"):
        return cfg.amplitude_window, cfg.amplitude_hop
    return cfg.spectral_window, cfg.spectral_hop


def stage_analysis(batch: OutputBatch, out_dir: Path, manifest: RunManifest, report, series) -> None:
    index_doc = {}
    for index in manifest.indices:
        group = [s for s in series if s.index_name == index]
        name = f"series_{index}.csv"
        batch.write_text(out_dir / name, series_csv(group))
        window, hop = _windows_for(index, manifest)
        index_doc[index] = {"file": name, "window": window, "hop": hop}
    batch.write_text(out_dir / SERIES_INDEX, dumps_json(index_doc))
    # report.json is always written: report and compare read it back
    batch.write_text(out_dir / "report.json", report_json(report))
    for index in manifest.indices:
        if "csv" in manifest.formats:
            batch.write_text(out_dir / f"report_{index}.csv", report_table_csv(report, index))
        if "svg" in manifest.formats:
            group = [s for s in series if s.index_name == index]
            batch.write_text(out_dir / f"plot_{index}.svg", render_svg(group))
            batch.write_text(out_dir / f"plot_{index}.csv", plot_data_csv(group))


def cmd_analyze(args) -> int:
    manifest = load_manifest(args.manifest)
    manifest = manifest.override(
        window=args.window,
        hop=args.hop,
        head=args.head,
        tail=args.tail,
        baseline=args.baseline,
        indices=tuple(_csv_list(args.indices)) if args.indices else None,
        formats=tuple(_csv_list(args.format)) if args.format else None,
        output_dir=Path(args.out) if args.out else None,
    ).validate()

    names = [t.name for t in manifest.trials]
    if len(set(names)) != len(names):
        raise InvalidConfig("trial file names must be unique (they name the output folders)")
    jobs = args.jobs or min(len(manifest.trials), os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        results = list(pool.map(lambda e: analyze_trial(e, manifest), manifest.trials))

    with OutputBatch() as batch:
        for entry, (report, series) in zip(manifest.trials, results):
            stage_analysis(batch, manifest.output_dir / entry.name, manifest, report, series)
    for entry, (report, _) in zip(manifest.trials, results):
        print(f"{entry.name}: {len(report.summaries)} summaries -> {manifest.output_dir / entry.name}")
    return EXIT_OK


# ---------------------------------------------------------------- report / compare


def load_analysis(directory: Path, index: str) -> tuple[FatigueReport, list]:
    report = read_report(directory / "report.json")
    try:
        index_doc = json.loads(read_text(directory / SERIES_INDEX))
    except json.JSONDecodeError:
        raise ValidationError(f"{directory / SERIES_INDEX}: invalid JSON") from None
    if index not in index_doc:
        raise ValidationError(f"{directory}: no {index} series (analyzed: {sorted(index_doc)})")
    entry = index_doc[index]
    label = display_name(report.surface) if report.metadata else directory.name
    series = read_series_csv(directory / entry["file"], index, entry["window"], entry["hop"], label)
    return report, series


def cmd_report(args) -> int:
    loaded = [load_analysis(Path(d), args.index) for d in args.analyses]
    reports = [r for r, _ in loaded]
    fmt = args.format or "csv"
    if fmt == "csv":
        text = report_table_csv(reports, args.index)
    elif fmt == "json":
        text = dumps_json([report_to_dict(r) for r in reports])
    elif fmt == "svg":
        series = [s for _, group in loaded for s in group]
        out = Path(args.out)
        with OutputBatch() as batch:
            batch.write_text(out, render_svg(series))
            batch.write_text(out.with_suffix(".csv"), plot_data_csv(series))
        print(f"wrote {out}")
        return EXIT_OK
    else:
        raise ValidationError(f"--format must be csv, json or svg, got {fmt!r}")
    with OutputBatch() as batch:
        batch.write_text(args.out, text)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    loaded = [load_analysis(Path(d), args.index) for d in args.analyses]
    reports = [r for r, _ in loaded]
    ranking = rank_surfaces(reports, args.index, args.aggregation, args.muscle)
    fmt = args.format or "json"
    out = Path(args.out)
    series = [s for _, group in loaded for s in group]
    with OutputBatch() as batch:
        batch.write_text(out / f"ranking.{fmt}", ranking_text(ranking, fmt))
        batch.write_text(out / f"report_{args.index}.csv", report_table_csv(reports, args.index))
        batch.write_text(out / f"plot_{args.index}.svg", render_svg(series, f"{args.index} by surface"))
        batch.write_text(out / f"plot_{args.index}.csv", plot_data_csv(series))
    print("ranking: " + " > ".join(display_name(s) for s in ranking.order))
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="semg-fatigue", description="Muscle-fatigue indices from quadriceps sEMG trials.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("simulate", help="synthesize a trial CSV plus ground-truth sidecar")
    s.add_argument("--profile", type=Path, help="YAML profile (see README)")
    s.add_argument("--out", required=True, help="trial CSV to write")
    s.add_argument("--seed", type=int)
    s.add_argument("--surface")
    s.add_argument("--duration", type=float)
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("analyze", help="compute index series and trend report for a manifest")
    a.add_argument("manifest", type=Path)
    a.add_argument("--window", type=float, help="amplitude window, seconds")
    a.add_argument("--hop", type=float, help="amplitude hop, seconds")
    a.add_argument("--indices", help="comma-separated index names")
    a.add_argument("--head", type=float)
    a.add_argument("--tail", type=float)
    a.add_argument("--baseline", choices=BASELINES)
    a.add_argument("--format", help="comma-separated: json,csv,svg")
    a.add_argument("--out", help="output directory (overrides the manifest)")
    a.add_argument("--jobs", type=int)
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("report", help="tabulate or plot analyzed trials")
    r.add_argument("analyses", nargs="+")
    r.add_argument("--index", default="iARV")
    r.add_argument("--format", choices=("csv", "json", "svg"))
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_report)

    c = sub.add_parser("compare", help="rank surfaces across analyzed trials")
    c.add_argument("analyses", nargs="+")
    c.add_argument("--index", default="iARV")
    c.add_argument("--aggregation", choices=AGGREGATIONS, default="majority")
    c.add_argument("--muscle")
    c.add_argument("--format", choices=("json", "csv"))
    c.add_argument("--out", required=True, help="output directory")
    c.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError(f"{parser.prog}: a subcommand is required (simulate, analyze, report, compare)")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FatigueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
