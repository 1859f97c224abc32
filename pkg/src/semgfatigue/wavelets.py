"""Orthonormal discrete wavelet transform (sym5 / db5) and wavelet-moment fatigue ratios.

The transform is a cascade of two-channel filter banks with periodic boundary
handling, which keeps it exactly orthonormal: coefficient energy equals signal
energy and the inverse reconstructs to rounding error. When an approximation at
some level has odd length, its last sample is set aside as a one-sample
remainder (an identity block), so arbitrary window lengths stay orthonormal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import DegenerateSpectrum, MaxLevelExceeded, ValidationError
from .signal import DEFAULT_SAMPLE_RATE, as_window
from .spectral import check_not_rectified

# Scaling (low-pass synthesis) filters, Daubechies' published orthonormal taps.
SCALING_FILTERS: dict[str, np.ndarray] = {
    "db5": np.array([
        0.16010239797419293, 0.6038292697971896, 0.7243085284377729,
        0.13842814590132074, -0.24229488706638203, -0.032244869584638375,
        0.07757149384004572, -0.006241490212798274, -0.012580751999081999,
        0.0033357252854737712,
    ]),
    "sym5": np.array([
        0.019538882735286728, -0.021101834024758855, -0.17532808990845047,
        0.01660210576452232, 0.6339789634582119, 0.7234076904024206,
        0.1993975339773936, -0.039134249302383094, 0.029519490925774643,
        0.027333068345077982,
    ]),
}
for _h in SCALING_FILTERS.values():
    _h.setflags(write=False)

DEFAULT_FAMILY = "sym5"
DEFAULT_LEVELS = 5


def wavelet_filters(family: str) -> tuple[np.ndarray, np.ndarray]:
    """Return (low-pass, high-pass) analysis filters as quadrature mirror pair."""
    try:
        h = SCALING_FILTERS[family]
    except KeyError:
        raise ValidationError(f"unknown wavelet family {family!r}; expected one of {sorted(SCALING_FILTERS)}") from None
    g = h[::-1] * (-1.0) ** np.arange(h.size)
    return h, g


def max_level(length: int, family: str = DEFAULT_FAMILY) -> int:
    """Deepest decomposition allowed for ``length`` samples (``length >= taps * 2**levels``)."""
    taps = SCALING_FILTERS[family].size
    level = 0
    while length >= taps * 2 ** (level + 1):
        level += 1
    return level


@dataclass(frozen=True, eq=False)
class WaveletDecomposition:
    family: str
    levels: int
    details: tuple[np.ndarray, ...]          # index 0 is level 1 (finest)
    approximation: np.ndarray                # level ``levels``
    remainders: tuple[float | None, ...]     # set-aside sample per level, if any
    band_edges: tuple[tuple[float, float], ...]
    approximation_band: tuple[float, float]
    length: int

    def energy(self) -> float:
        e = float(np.dot(self.approximation, self.approximation))
        e += sum(float(np.dot(d, d)) for d in self.details)
        e += sum(r * r for r in self.remainders if r is not None)
        return e

    def band_energies(self) -> np.ndarray:
        """Energies of detail levels 1..L followed by the approximation band.

        A remainder sample set aside at level j is counted in the approximation
        band of that level, i.e. in the next coarser detail level (or the final
        approximation).
        """
        energies = [float(np.dot(d, d)) for d in self.details]
        energies.append(float(np.dot(self.approximation, self.approximation)))
        for j, r in enumerate(self.remainders):
            if r is not None:
                energies[j + 1] += r * r
        return np.array(energies)

    def band_centers(self) -> np.ndarray:
        bands = list(self.band_edges) + [self.approximation_band]
        return np.array([(lo + hi) / 2 for lo, hi in bands])


def _analysis_step(x: np.ndarray, h: np.ndarray, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = x.size
    idx = (2 * np.arange(n // 2)[:, None] + np.arange(h.size)[None, :]) % n
    seg = x[idx]
    return seg @ h, seg @ g


def _synthesis_step(a: np.ndarray, d: np.ndarray, h: np.ndarray, g: np.ndarray) -> np.ndarray:
    n = 2 * a.size
    out = np.zeros(n)
    idx = (2 * np.arange(a.size)[:, None] + np.arange(h.size)[None, :]) % n
    np.add.at(out, idx, a[:, None] * h[None, :] + d[:, None] * g[None, :])
    return out


def dwt(
    window,
    family: str = DEFAULT_FAMILY,
    levels: int = DEFAULT_LEVELS,
    sample_rate: float | None = None,
) -> WaveletDecomposition:
    w = as_window(window, sample_rate or DEFAULT_SAMPLE_RATE)
    check_not_rectified(w, "wavelet decomposition")
    fs = sample_rate or w.sample_rate
    h, g = wavelet_filters(family)
    if levels < 1:
        raise ValidationError("levels must be >= 1")
    if w.length < h.size * 2**levels:
        raise MaxLevelExceeded(
            f"{levels} levels of {family} need >= {h.size * 2**levels} samples, window has {w.length}"
        )

    approx = np.array(w.values, dtype=np.float64)
    details, remainders, edges = [], [], []
    for level in range(1, levels + 1):
        if approx.size % 2:
            remainders.append(float(approx[-1]))
            approx = approx[:-1]
        else:
            remainders.append(None)
        approx, detail = _analysis_step(approx, h, g)
        details.append(detail)
        edges.append((fs / 2 ** (level + 1), fs / 2**level))
    return WaveletDecomposition(
        family=family,
        levels=levels,
        details=tuple(details),
        approximation=approx,
        remainders=tuple(remainders),
        band_edges=tuple(edges),
        approximation_band=(0.0, fs / 2 ** (levels + 1)),
        length=w.length,
    )


def idwt(decomp: WaveletDecomposition) -> np.ndarray:
    h, g = wavelet_filters(decomp.family)
    approx = decomp.approximation
    for level in range(decomp.levels, 0, -1):
        approx = _synthesis_step(approx, decomp.details[level - 1], h, g)
        r = decomp.remainders[level - 1]
        if r is not None:
            approx = np.append(approx, r)
    return approx


# Scale selector: a detail level (1 = finest), "A" for the final approximation,
# or "M" for every band of the decomposition.
Scale = Union[int, str]


@dataclass(frozen=True)
class WaveletRatio:
    """``sum_j f_j**num_order * E_j`` over ``num_scales`` divided by the same over ``den_scales``.

    ``E_j`` is the energy of band j and ``f_j`` its center frequency.
    """

    num_order: float
    num_scales: tuple[Scale, ...]
    den_order: float
    den_scales: tuple[Scale, ...]


DEFAULT_WAVELET_RATIOS: dict[str, WaveletRatio] = {
    "WIRM1551": WaveletRatio(-1, (5,), 5, (1,)),
    "WIRM1M51": WaveletRatio(-1, ("M",), 5, (1,)),
    "WIRM1522": WaveletRatio(-1, (5,), 2, (2,)),
}


def _band_indices(scales: Sequence[Scale], levels: int) -> list[int]:
    out: list[int] = []
    for s in scales:
        if s == "M":
            out.extend(range(levels + 1))
        elif s == "A":
            out.append(levels)
        elif isinstance(s, int) and 1 <= s <= levels:
            out.append(s - 1)
        else:
            raise ValidationError(f"scale {s!r} not available in a {levels}-level decomposition")
    return out


def wavelet_moment(decomp: WaveletDecomposition, order: float, scales: Sequence[Scale]) -> float:
    energies = decomp.band_energies()
    centers = decomp.band_centers()
    idx = _band_indices(scales, decomp.levels)
    return float(np.sum(centers[idx] ** order * energies[idx]))


def wavelet_indices(
    window,
    sample_rate: float | None = None,
    family: str = DEFAULT_FAMILY,
    levels: int = DEFAULT_LEVELS,
    ratios: Mapping[str, WaveletRatio] | None = None,
) -> dict[str, float]:
    """WIRM ratios of one window, keyed by index name."""
    decomp = dwt(window, family, levels, sample_rate)
    if not np.any(decomp.band_energies() > 0):
        raise DegenerateSpectrum("all wavelet band energies are zero")
    out = {}
    for name, r in (ratios or DEFAULT_WAVELET_RATIOS).items():
        den = wavelet_moment(decomp, r.den_order, r.den_scales)
        if not den > 0:
            raise DegenerateSpectrum(f"{name}: denominator band has no energy")
        out[name] = wavelet_moment(decomp, r.num_order, r.num_scales) / den
    return out


def parse_ratio(spec: Mapping) -> WaveletRatio:
    """Build a :class:`WaveletRatio` from a manifest mapping."""

    def scales(v):
        v = v if isinstance(v, (list, tuple)) else [v]
        return tuple(int(s) if str(s).isdigit() else str(s).upper() for s in v)

    try:
        return WaveletRatio(
            float(spec["num_order"]), scales(spec["num_scales"]),
            float(spec["den_order"]), scales(spec["den_scales"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad wavelet ratio definition {dict(spec)!r}: {exc}") from None
