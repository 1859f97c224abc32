import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semgfatigue.errors import (
    CountOutOfRange,
    IoFailure,
    MalformedHeader,
    NonMonotoneTimestamps,
    TrialFormatError,
    TruncatedRow,
    ValidationError,
)
from semgfatigue.fileio import OutputBatch, atomic_write_text
from semgfatigue.frontend import FrontEndConfig
from semgfatigue.signal import Muscle
from semgfatigue.trialio import HEADER, format_trial_csv, parse_trial_csv, trial_times_ms, write_trial_csv

GOOD = HEADER + "\n0,10,20,30\n1,11,21,31\n2,12,22,32\n"


def write(tmp_path, text, name="trial.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestParse:
    def test_three_rows(self, tmp_path):
        rec = parse_trial_csv(write(tmp_path, GOOD))
        assert rec.n_samples == 3
        assert len(rec.channels) == 3
        assert rec.rectified

    def test_conversion_uses_gain(self, tmp_path):
        cfg = FrontEndConfig(gain_resistor_ohms=49_400.0)
        rec = parse_trial_csv(write(tmp_path, GOOD), cfg)
        vm = rec.channel(Muscle.VASTUS_MEDIALIS).samples
        assert vm[0] == pytest.approx(10 * 5000 / 1023 / 2.0)

    def test_bipolar_offset(self, tmp_path):
        cfg = FrontEndConfig(gain_resistor_ohms=49_400.0, rectifier_enabled=False)
        rec = parse_trial_csv(write(tmp_path, HEADER + "\n0,512,500,524\n"), cfg)
        assert rec.channel(Muscle.VASTUS_MEDIALIS).samples[0] == 0.0
        assert rec.channel(Muscle.RECTUS_FEMORIS).samples[0] < 0.0
        assert not rec.rectified

    def test_start_time(self, tmp_path):
        rec = parse_trial_csv(write(tmp_path, HEADER + "\n5000,1,1,1\n5001,1,1,1\n"))
        assert rec.start_time == 5.0

    def test_missing_column_header(self, tmp_path):
        with pytest.raises(MalformedHeader) as err:
            parse_trial_csv(write(tmp_path, "time_ms,vm,rf\n0,1,2\n"))
        assert err.value.line == 1
        assert ":1:" in str(err.value)

    def test_empty_file(self, tmp_path):
        with pytest.raises(MalformedHeader):
            parse_trial_csv(write(tmp_path, ""))

    def test_truncated_row(self, tmp_path):
        with pytest.raises(TruncatedRow) as err:
            parse_trial_csv(write(tmp_path, GOOD + "3,13,23\n"))
        assert err.value.line == 5
        assert str(err.value).startswith(f"{tmp_path / 'trial.csv'}:5:")

    def test_non_integer(self, tmp_path):
        with pytest.raises(TrialFormatError) as err:
            parse_trial_csv(write(tmp_path, HEADER + "\n0,1,2,3\n1,1,x,3\n"))
        assert err.value.line == 3

    def test_no_rows(self, tmp_path):
        with pytest.raises(TruncatedRow):
            parse_trial_csv(write(tmp_path, HEADER + "\n"))

    def test_timestamps_going_backwards(self, tmp_path):
        with pytest.raises(NonMonotoneTimestamps) as err:
            parse_trial_csv(write(tmp_path, HEADER + "\n0,1,1,1\n1,1,1,1\n1,1,1,1\n"))
        assert err.value.line == 4

    def test_timestamp_gap(self, tmp_path):
        with pytest.raises(NonMonotoneTimestamps) as err:
            parse_trial_csv(write(tmp_path, HEADER + "\n0,1,1,1\n1,1,1,1\n9,1,1,1\n"))
        assert err.value.line == 4

    def test_count_out_of_range(self, tmp_path):
        with pytest.raises(CountOutOfRange) as err:
            parse_trial_csv(write(tmp_path, HEADER + "\n0,1,1,1\n1,1,1024,1\n"))
        assert err.value.line == 3

    def test_rate_above_millisecond_resolution(self, tmp_path):
        with pytest.raises(ValidationError):
            parse_trial_csv(write(tmp_path, GOOD), sample_rate=2000.0)
        with pytest.raises(ValidationError):
            trial_times_ms(10, 2000.0)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoFailure):
            parse_trial_csv(tmp_path / "absent.csv")
        assert issubclass(IoFailure, OSError)


class TestRoundTrip:
    @settings(max_examples=30, deadline=None)
    @given(
        st.integers(1, 300),
        st.sampled_from([250.0, 400.0, 500.0, 1000.0]),
        st.integers(0, 10_000),
        st.booleans(),
        st.integers(0, 2**32 - 1),
    )
    def test_write_parse_byte_identical(self, tmp_path_factory, n, fs, start, rect, seed):
        tmp = tmp_path_factory.mktemp("rt")
        cfg = FrontEndConfig(rectifier_enabled=rect, gain_resistor_ohms=330.0)
        counts = np.random.default_rng(seed).integers(0, 1024, size=(n, 3))
        text = format_trial_csv(trial_times_ms(n, fs, start), counts)
        src = write(tmp, text)
        rec = parse_trial_csv(src, cfg, fs)
        write_trial_csv(rec, tmp / "out.csv", cfg)
        assert (tmp / "out.csv").read_bytes() == src.read_bytes()


class TestAtomicWrites:
    def test_failure_leaves_nothing(self, tmp_path):
        with pytest.raises(RuntimeError):
            with OutputBatch() as batch:
                batch.write_text(tmp_path / "a.txt", "a")
                batch.write_text(tmp_path / "b.txt", "b")
                raise RuntimeError("boom")
        assert list(tmp_path.iterdir()) == []

    def test_commit_publishes_all(self, tmp_path):
        with OutputBatch() as batch:
            batch.write_text(tmp_path / "a.txt", "a")
            batch.write_text(tmp_path / "sub" / "b.txt", "b")
        assert (tmp_path / "a.txt").read_text() == "a"
        assert (tmp_path / "sub" / "b.txt").read_text() == "b"
        assert not [p for p in tmp_path.rglob("*.tmp")]

    def test_replaces_existing(self, tmp_path):
        atomic_write_text(tmp_path / "a.txt", "old")
        atomic_write_text(tmp_path / "a.txt", "new")
        assert (tmp_path / "a.txt").read_text() == "new"

    def test_unwritable_target(self, tmp_path):
        (tmp_path / "blocker").write_text("x")
        with pytest.raises(IoFailure):
            atomic_write_text(tmp_path / "blocker" / "a.txt", "a")
