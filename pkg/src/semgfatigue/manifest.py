"""Run manifests (YAML).

Example::

    trials:
      - path: sand.csv              # relative to the manifest file
        sample_rate: 1000
        metadata:
          participant_id: P1
          surface: Sand
          distance_km: 5
          ambient_temperature_c: 17
          front_end: {gain_resistor_ohms: 100, rectifier_enabled: true}
    indices: [iARV, iRMS]
    windows:
      amplitude: {window: 0.2, hop: 0.2}
      spectral: {window: 1.024, hop: 0.512}
    dimitrov_orders: [-1, 5]
    wavelet:
      family: sym5
      levels: 5
      ratios:                       # optional overrides / additions
        WIRM1551: {num_order: -1, num_scales: [5], den_order: 5, den_scales: [1]}
    trend: {head: 30, tail: 30, smoothing: 30, baseline: start}
    output: {directory: results, formats: [json, csv]}
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .errors import InvalidConfig
from .fileio import read_text
from .frontend import FrontEndConfig
from .indices import ALL_INDICES, IndexConfig
from .reports import metadata_from_dict, metadata_to_dict
from .signal import DEFAULT_SAMPLE_RATE, TrialMetadata
from .trend import BASELINES, DEFAULT_HEAD, DEFAULT_SMOOTHING, DEFAULT_TAIL
from .wavelets import DEFAULT_WAVELET_RATIOS, parse_ratio


@dataclass(frozen=True)
class TrialEntry:
    path: Path
    metadata: TrialMetadata
    sample_rate: float = DEFAULT_SAMPLE_RATE

    @property
    def front_end(self) -> FrontEndConfig:
        return self.metadata.front_end or FrontEndConfig()

    @property
    def name(self) -> str:
        return self.path.stem


@dataclass(frozen=True)
class TrendParams:
    head: float = DEFAULT_HEAD
    tail: float = DEFAULT_TAIL
    smoothing: float = DEFAULT_SMOOTHING
    baseline: str = "start"


@dataclass(frozen=True)
class RunManifest:
    trials: tuple[TrialEntry, ...]
    indices: tuple[str, ...] = ("iARV",)
    index_config: IndexConfig = field(default_factory=IndexConfig)
    trend: TrendParams = field(default_factory=TrendParams)
    output_dir: Path = Path("results")
    formats: tuple[str, ...] = ("json", "csv")

    def validate(self, check_files: bool = True) -> "RunManifest":
        if not self.trials:
            raise InvalidConfig("manifest lists no trials")
        unknown = [i for i in self.indices if i not in ALL_INDICES]
        if unknown:
            raise InvalidConfig(f"unknown indices {unknown}")
        bad_formats = [f for f in self.formats if f not in ("json", "csv", "svg")]
        if bad_formats:
            raise InvalidConfig(f"unknown output formats {bad_formats}")
        if self.trend.baseline not in BASELINES:
            raise InvalidConfig(f"trend.baseline must be one of {BASELINES}")
        if not (self.trend.head > 0 and self.trend.tail > 0 and self.trend.smoothing > 0):
            raise InvalidConfig("trend durations must be positive")
        self.index_config.validate()
        for t in self.trials:
            t.front_end.validate(t.sample_rate)
            if check_files and not t.path.is_file():
                raise FileNotFoundError(f"{t.path}: trial file not found")
        return self

    def override(self, **changes) -> "RunManifest":
        """Apply command-line overrides; ``None`` values leave the manifest setting alone."""
        cfg, trend, top = {}, {}, {}
        for key, value in changes.items():
            if value is None:
                continue
            if key in ("window", "hop"):
                cfg[f"amplitude_{key}"] = value
            elif key in ("head", "tail", "smoothing", "baseline"):
                trend[key] = value
            else:
                top[key] = value
        return replace(
            self,
            index_config=replace(self.index_config, **cfg),
            trend=replace(self.trend, **trend),
            **top,
        )


def _section(data: dict, key: str) -> dict:
    value = data.get(key) or {}
    if not isinstance(value, dict):
        raise InvalidConfig(f"manifest section {key!r} must be a mapping")
    return value


def manifest_from_dict(data: dict, base_dir: Path = Path(".")) -> RunManifest:
    if not isinstance(data, dict):
        raise InvalidConfig("manifest must be a mapping at the top level")
    try:
        trials = []
        for entry in data.get("trials") or []:
            meta = metadata_from_dict(entry.get("metadata") or {"participant_id": "unknown", "surface": "Other"})
            path = Path(entry["path"])
            trials.append(TrialEntry(
                path if path.is_absolute() else base_dir / path,
                meta,
                float(entry.get("sample_rate", DEFAULT_SAMPLE_RATE)),
            ))

        windows = _section(data, "windows")
        amp, spec = windows.get("amplitude") or {}, windows.get("spectral") or {}
        wavelet = _section(data, "wavelet")
        ratios = dict(DEFAULT_WAVELET_RATIOS)
        for name, r in (wavelet.get("ratios") or {}).items():
            ratios[name] = parse_ratio(r)
        orders = data.get("dimitrov_orders", (-1.0, 5.0))
        defaults = IndexConfig()
        config = IndexConfig(
            amplitude_window=float(amp.get("window", defaults.amplitude_window)),
            amplitude_hop=float(amp.get("hop", defaults.amplitude_hop)),
            spectral_window=float(spec.get("window", defaults.spectral_window)),
            spectral_hop=float(spec.get("hop", defaults.spectral_hop)),
            dimitrov_orders=(float(orders[0]), float(orders[1])),
            wavelet_family=str(wavelet.get("family", defaults.wavelet_family)),
            wavelet_levels=int(wavelet.get("levels", defaults.wavelet_levels)),
            wavelet_ratios=ratios,
        )
        trend = _section(data, "trend")
        output = _section(data, "output")
        indices = data.get("indices", ["iARV"])
        if isinstance(indices, str):
            indices = [i.strip() for i in indices.split(",")]
        out_dir = Path(output.get("directory", "results"))
        return RunManifest(
            trials=tuple(trials),
            indices=tuple(indices),
            index_config=config,
            trend=TrendParams(
                float(trend.get("head", DEFAULT_HEAD)),
                float(trend.get("tail", DEFAULT_TAIL)),
                float(trend.get("smoothing", DEFAULT_SMOOTHING)),
                str(trend.get("baseline", "start")),
            ),
            output_dir=out_dir if out_dir.is_absolute() else base_dir / out_dir,
            formats=tuple(output.get("formats", ("json", "csv"))),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidConfig):
            raise
        raise InvalidConfig(f"bad manifest: {exc!r}") from None


def load_manifest(path) -> RunManifest:
    path = Path(path)
    text = read_text(path)
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}" if mark else str(path)
        raise InvalidConfig(f"{where}: invalid YAML") from None
    return manifest_from_dict(data, path.parent)


def single_trial_manifest(csv_name: str, metadata: TrialMetadata, sample_rate: float, indices=("iARV",)) -> str:
    doc = {
        "trials": [{"path": csv_name, "sample_rate": sample_rate, "metadata": metadata_to_dict(metadata)}],
        "indices": list(indices),
    }
    return yaml.safe_dump(doc, sort_keys=False)
