import csv
import io
import json
import re

import numpy as np
import pytest

from semgfatigue.errors import ValidationError
from semgfatigue.frontend import FrontEndConfig
from semgfatigue.indices import WindowedFeatureSeries
from semgfatigue.plot import emit_plot_data, plot_data_csv, render_svg
from semgfatigue.reports import (
    ranking_from_dict,
    ranking_text,
    ranking_to_dict,
    read_report,
    read_series_csv,
    report_from_dict,
    report_json,
    report_table_csv,
    series_csv,
    write_report,
)
from semgfatigue.signal import Muscle, Surface, TrialMetadata
from semgfatigue.trend import FatigueReport, TrendSummary, rank_surfaces

from test_trend import MUSCLES, table_reports


def flat_series(label="Sand", muscle=Muscle.VASTUS_MEDIALIS, value=1.5, n=20):
    t = (np.arange(n) + 0.5) * 0.2
    return WindowedFeatureSeries("iARV", muscle, t, np.full(n, value), 0.2, 0.2, label)


def polylines(svg):
    return re.findall(r"<polyline [^>]*>", svg)


class TestTable:
    def test_table2_row(self):
        text = report_table_csv(table_reports())
        lines = text.splitlines()
        assert lines[0] == "Muscle,Asphalt,Sand,Athletics Track"
        assert "Vastus Medialis,100.04,127.71,54.90" in lines
        assert lines[1:] == [
            "Vastus Medialis,100.04,127.71,54.90",
            "Rectus Femoris,100.02,126.75,121.22",
            "Vastus Lateralis,99.14,100.07,35.90",
        ]

    def test_empty_summaries(self):
        report = FatigueReport(TrialMetadata("P1", Surface.SAND), ())
        assert report_table_csv(report) == "Muscle,Sand\n"

    def test_other_index_filtered(self):
        assert report_table_csv(table_reports(), "iRMS").count("\n") == 1


class TestJson:
    def test_report_round_trip(self, tmp_path):
        meta = TrialMetadata("P7", Surface.ATHLETICS_TRACK, 5.0, 14.5, FrontEndConfig(gain_resistor_ohms=220.0), "2024-05-01")
        summaries = tuple(
            TrendSummary(m, "iARV", 12.5 * i, 0.1, 1.0, 1.125, 30.0, 30.0, 312.4 if i == 1 else None)
            for i, m in enumerate(MUSCLES)
        )
        report = FatigueReport(meta, summaries, rank_surfaces(table_reports()))
        path = write_report(report, tmp_path / "r.json")
        back = read_report(path)
        assert back.metadata == report.metadata
        assert back.summaries == report.summaries
        assert ranking_to_dict(back.surface_ranking) == ranking_to_dict(report.surface_ranking)
        assert report_json(back) == report_json(report)

    def test_ranking_round_trip(self):
        r = rank_surfaces(table_reports())
        assert ranking_from_dict(json.loads(ranking_text(r))) == r

    def test_ranking_csv(self):
        text = ranking_text(rank_surfaces(table_reports(), aggregation="mean"), "csv")
        assert text.splitlines()[1] == "1,Sand,118.18"

    def test_bad_document(self):
        with pytest.raises(ValidationError):
            report_from_dict({"summaries": [{"muscle": "VastusMedialis"}]})

    def test_invalid_json_names_line(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{\n  "summaries": [\n,]\n}\n')
        with pytest.raises(ValidationError, match=r"bad.json:3:"):
            read_report(p)


class TestSeriesFiles:
    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        t = (np.arange(50) + 0.5) * 0.2
        ss = [WindowedFeatureSeries("iRMS", m, t, rng.random(50), 0.2, 0.2) for m in MUSCLES]
        p = tmp_path / "s.csv"
        p.write_text(series_csv(ss))
        back = read_series_csv(p, "iRMS", 0.2, 0.2)
        for a, b in zip(ss, back):
            assert a.muscle == b.muscle
            assert np.array_equal(a.values, b.values)
            assert np.array_equal(a.times, b.times)

    def test_mismatched_axes(self):
        with pytest.raises(ValidationError):
            series_csv([flat_series(n=10), flat_series(n=11)])


class TestPlot:
    def test_single_flat_series(self):
        svg = render_svg([flat_series()])
        lines = polylines(svg)
        assert len(lines) == 1
        ys = {p.split(",")[1] for p in re.search(r'points="([^"]+)"', lines[0]).group(1).split()}
        assert len(ys) == 1

    def test_three_surfaces_one_panel(self):
        svg = render_svg([flat_series(s, value=v) for s, v in (("Asphalt", 1), ("Sand", 2), ("Athletics Track", 3))])
        assert svg.count('class="panel"') == 1
        lines = polylines(svg)
        assert len(lines) == 3
        styles = {re.search(r'stroke="([^"]+)"', ln).group(1) for ln in lines}
        assert styles == {"#1f4fd1", "#d62728", "#000000"}
        assert "time (s)" in svg and "iARV" in svg

    def test_three_by_three_layout(self):
        series = [flat_series(s, m, v) for m in MUSCLES for s, v in (("Asphalt", 1), ("Sand", 2), ("Athletics Track", 3))]
        svg = render_svg(series)
        assert svg.count('class="panel"') == 3
        assert len(polylines(svg)) == 9

    def test_plot_csv_values_exact(self, tmp_path):
        rng = np.random.default_rng(5)
        t = (np.arange(40) + 0.5) * 0.2
        ss = [WindowedFeatureSeries("iARV", m, t, rng.random(40) * 1e-3, 0.2, 0.2, "Sand") for m in MUSCLES]
        svg_path, csv_path = emit_plot_data(ss, tmp_path / "plot.svg")
        assert svg_path.read_text().startswith("<svg")
        rows = list(csv.DictReader(io.StringIO(csv_path.read_text())))
        assert len(rows) == 120
        got = np.array([float(r["value"]) for r in rows])
        assert np.array_equal(got, np.concatenate([s.values for s in ss]))
        assert plot_data_csv(ss) == csv_path.read_text()

    def test_nothing_to_plot(self):
        with pytest.raises(ValidationError):
            render_svg([])
