"""Dependency-free SVG line charts: one panel per muscle, one curve per trial label."""

from __future__ import annotations

import math
from html import escape
from pathlib import Path
from typing import Sequence

from .errors import ValidationError
from .fileio import OutputBatch
from .indices import WindowedFeatureSeries
from .signal import QUADRICEPS, display_name

PANEL_W, PANEL_H = 640, 220
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 150, 30, 45

# asphalt blue, sand red, track black, as in the field-trial figure
SURFACE_COLORS = {"Asphalt": "#1f4fd1", "Sand": "#d62728", "Athletics Track": "#000000"}
FALLBACK_COLORS = ("#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
DASHES = ("", "6,3", "2,2", "8,3,2,3")


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    span = hi - lo
    raw = span / max(count - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + step * 1e-9:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _styles(labels: list[str]) -> dict[str, tuple[str, str]]:
    styles = {}
    spare = iter(FALLBACK_COLORS * 4)
    for i, label in enumerate(labels):
        color = SURFACE_COLORS.get(label) or next(spare)
        styles[label] = (color, DASHES[i % len(DASHES)])
    return styles


def render_svg(series: Sequence[WindowedFeatureSeries], title: str | None = None) -> str:
    if not series:
        raise ValidationError("nothing to plot")
    index_names = sorted({s.index_name for s in series})
    muscles = list(dict.fromkeys(s.muscle for s in series))
    muscles = [m for m in QUADRICEPS if m in muscles] + [m for m in muscles if m not in QUADRICEPS]
    labels = list(dict.fromkeys(s.label or s.index_name for s in series))
    styles = _styles(labels)
    unit = "/".join(index_names)

    width = MARGIN_L + PANEL_W + MARGIN_R
    height = len(muscles) * (PANEL_H + MARGIN_T + MARGIN_B) + 30
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">'
        f"{escape(title or unit)}</text>",
    ]
    for p, muscle in enumerate(muscles):
        panel = [s for s in series if s.muscle == muscle]
        x0 = MARGIN_L
        y0 = 30 + p * (PANEL_H + MARGIN_T + MARGIN_B) + MARGIN_T
        tmin = min(float(s.times[0]) for s in panel)
        tmax = max(float(s.times[-1]) for s in panel)
        vmin = min(float(s.values.min()) for s in panel)
        vmax = max(float(s.values.max()) for s in panel)
        if tmax == tmin:
            tmax = tmin + 1.0
        if vmax == vmin:
            pad = abs(vmax) * 0.1 or 1.0
            vmin, vmax = vmin - pad, vmax + pad

        def sx(t, tmin=tmin, tmax=tmax):
            return x0 + (t - tmin) / (tmax - tmin) * PANEL_W

        def sy(v, vmin=vmin, vmax=vmax):
            return y0 + PANEL_H - (v - vmin) / (vmax - vmin) * PANEL_H

        out.append(f'<g class="panel" data-muscle="{escape(display_name(muscle))}">')
        out.append(
            f'<rect x="{x0}" y="{y0}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="#444"/>'
        )
        out.append(f'<text x="{x0}" y="{y0 - 8}" font-size="13">{escape(display_name(muscle))}</text>')
        for t in _nice_ticks(tmin, tmax):
            out.append(
                f'<text x="{sx(t):.2f}" y="{y0 + PANEL_H + 16}" text-anchor="middle">{_fmt(t)}</text>'
            )
        for v in _nice_ticks(vmin, vmax):
            out.append(f'<text x="{x0 - 6}" y="{sy(v) + 4:.2f}" text-anchor="end">{_fmt(v)}</text>')
        out.append(
            f'<text x="{x0 + PANEL_W / 2}" y="{y0 + PANEL_H + 34}" text-anchor="middle">time (s)</text>'
        )
        out.append(
            f'<text x="{x0 - 55}" y="{y0 + PANEL_H / 2}" text-anchor="middle" '
            f'transform="rotate(-90 {x0 - 55} {y0 + PANEL_H / 2})">{escape(unit)}</text>'
        )
        for k, s in enumerate(panel):
            label = s.label or s.index_name
            color, dash = styles[label]
            pts = " ".join(f"{sx(t):.2f},{sy(v):.2f}" for t, v in zip(s.times, s.values))
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            out.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1"{dash_attr} '
                f'data-label="{escape(label)}" points="{pts}"/>'
            )
            ly = y0 + 14 + 16 * k
            lx = x0 + PANEL_W + 12
            out.append(
                f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{color}"{dash_attr}/>'
            )
            out.append(f'<text x="{lx + 26}" y="{ly}">{escape(label)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_data_csv(series: Sequence[WindowedFeatureSeries]) -> str:
    lines = ["muscle,label,index,time_s,value"]
    for s in series:
        head = f"{display_name(s.muscle)},{s.label or s.index_name},{s.index_name}"
        lines.extend(f"{head},{float(t)!r},{float(v)!r}" for t, v in zip(s.times, s.values))
    return "\n".join(lines) + "\n"


def emit_plot_data(
    series: Sequence[WindowedFeatureSeries],
    svg_path,
    csv_path=None,
    title: str | None = None,
) -> tuple[Path, Path]:
    """Write the SVG chart and a CSV holding exactly the plotted points."""
    svg_path = Path(svg_path)
    csv_path = Path(csv_path) if csv_path else svg_path.with_suffix(".csv")
    svg = render_svg(series, title)
    data = plot_data_csv(series)
    with OutputBatch() as batch:
        batch.write_text(svg_path, svg)
        batch.write_text(csv_path, data)
    return svg_path, csv_path
