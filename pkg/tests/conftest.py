import time
from contextlib import contextmanager

import numpy as np
import pytest

from semgfatigue import ChannelSignal, SyntheticProfile, TrialMetadata, TrialRecording, synthesize
from semgfatigue.frontend import FrontEndConfig
from semgfatigue.signal import QUADRICEPS

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Context manager that records one PASS/FAIL line per acceptance criterion.

    The body fills the yielded dict with measurements shown next to the verdict.
    """

    @contextmanager
    def run(number, description):
        detail: dict = {}
        start = time.perf_counter()
        try:
            yield detail
        except BaseException:
            _ACCEPTANCE.append((number, description, False, _describe(detail, start)))
            raise
        _ACCEPTANCE.append((number, description, True, _describe(detail, start)))

    return run


def _describe(detail, start):
    parts = [f"{k}={v}" for k, v in detail.items()]
    parts.append(f"wall={time.perf_counter() - start:.2f}s")
    return ", ".join(parts)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, passed, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        status = "PASS" if passed else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"[{status}] {number}. {description}{suffix}")


def make_recording(duration=20.0, seed=0, surface="Sand", rectified=False, envelope=None, **profile):
    channels = []
    for j, muscle in enumerate(QUADRICEPS):
        p = SyntheticProfile(
            duration=duration,
            noise_seed=seed * 10 + j,
            amplitude_envelope=envelope or ((0.0, 1.0),),
            **profile,
        )
        ch, _ = synthesize(p, 1000.0, muscle)
        if rectified:
            ch = ChannelSignal(muscle, np.abs(ch.samples), 1000.0, rectified=True)
        channels.append(ch)
    meta = TrialMetadata("P1", surface, 5.0, front_end=FrontEndConfig(rectifier_enabled=rectified))
    return TrialRecording(1000.0, tuple(channels), rectified=rectified, metadata=meta)
