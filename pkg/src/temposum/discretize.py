"""Symbolic discretization: z-normalization, PAA and SAX / raw-range binning.

Bins are half-open ``[lo, hi)``: a value sitting exactly on a breakpoint
gets the letter of the upper bin.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from datetime import date
from typing import Sequence

import numpy as np
from scipy.stats import norm

from temposum.errors import DegenerateSeries
from temposum.model import LEVEL_LABELS, WEEKDAYS, Granularity, TimeSeries

SAX = "sax-gaussian"
RAW = "raw-ranges"


@dataclass(frozen=True)
class BinningScheme:
    mode: str
    breakpoints: tuple[float, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        labels = tuple(self.labels)
        if self.mode not in (SAX, RAW):
            raise ValueError(f"unknown binning mode {self.mode!r}")
        if len(labels) != len(bps) + 1:
            raise ValueError(f"{len(labels)} labels for {len(bps) + 1} bins")
        if not 2 <= len(labels) <= 26:
            raise ValueError("alphabet size must be within 2..26")
        if any(b1 <= b0 for b0, b1 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly ascending")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "labels", labels)

    @property
    def alphabet_size(self) -> int:
        return len(self.labels)

    @property
    def letters(self) -> str:
        return string.ascii_lowercase[: self.alphabet_size]

    def bin_index(self, values) -> np.ndarray:
        return np.searchsorted(np.asarray(self.breakpoints), np.asarray(values, dtype=float), side="right")

    def letter(self, value: float) -> str:
        return self.letters[int(self.bin_index([value])[0])]

    def label_of(self, letter: str) -> str:
        return self.labels[self.letters.index(letter)]

    def letter_of(self, label: str) -> str:
        return self.letters[self.labels.index(label)]


def gaussian_breakpoints(alphabet_size: int) -> np.ndarray:
    """Cut points splitting the standard normal into equiprobable bins."""
    if not 2 <= alphabet_size <= 26:
        raise ValueError("alphabet size must be within 2..26")
    return norm.ppf(np.arange(1, alphabet_size) / alphabet_size)


def sax_scheme(alphabet_size: int = 5, labels: Sequence[str] | None = None) -> BinningScheme:
    if labels is None:
        labels = LEVEL_LABELS.get(alphabet_size) or [f"level {i + 1}" for i in range(alphabet_size)]
    return BinningScheme(SAX, tuple(gaussian_breakpoints(alphabet_size)), tuple(labels))


def raw_range_scheme(bins: Sequence[dict]) -> BinningScheme:
    """Scheme from ``[{"upper_bound": x, "label": s}, ...]``; the last bin is open-ended."""
    bounds = [b["upper_bound"] for b in bins[:-1]]
    if any(b is None for b in bounds):
        raise ValueError("only the last raw bin may omit its upper bound")
    return BinningScheme(RAW, tuple(bounds), tuple(b["label"] for b in bins))


def z_normalize(series) -> np.ndarray:
    """Zero mean, unit sample standard deviation (ddof=1)."""
    x = series.array if isinstance(series, TimeSeries) else np.asarray(series, dtype=float)
    if x.size < 2:
        raise DegenerateSeries("need at least 2 points to normalize")
    sd = x.std(ddof=1)
    if sd == 0 or not np.isfinite(sd):
        raise DegenerateSeries("constant series has zero standard deviation")
    return (x - x.mean()) / sd


def paa(values, segment_len: int, partial: bool = False) -> np.ndarray:
    """Means of consecutive chunks of `segment_len`; a short tail is kept only if `partial`."""
    if segment_len < 1:
        raise ValueError("segment_len must be >= 1")
    x = np.asarray(values, dtype=float)
    full = x.size // segment_len
    means = x[: full * segment_len].reshape(full, segment_len).mean(axis=1)
    if partial and x.size % segment_len:
        means = np.append(means, x[full * segment_len:].mean())
    return means


@dataclass(frozen=True)
class Window:
    ordinal: int  # 1-based
    indices: tuple[int, ...]
    complete: bool


def partition(dates: Sequence[date], granularity: Granularity, calendar: bool = False) -> list[Window]:
    """Split logged days into time windows.

    Default mode chunks consecutive logged days into runs of ``tw_len``; the
    trailing short run is marked incomplete.  Calendar mode groups by ISO
    week / calendar month and marks windows with unlogged days incomplete.
    """
    n = len(dates)
    if granularity.full_range:
        return [Window(1, tuple(range(n)), True)]
    tw = granularity.tw_len
    if not calendar or granularity.kind == "day" and tw == 1:
        out = []
        for k, start in enumerate(range(0, n, tw)):
            idx = tuple(range(start, min(start + tw, n)))
            out.append(Window(k + 1, idx, len(idx) == tw))
        return out
    groups: dict[tuple, list[int]] = {}
    for i, d in enumerate(dates):
        if granularity.kind == "week":
            key = d.isocalendar()[:2]
        elif granularity.kind == "month":
            key = (d.year, d.month)
        else:
            key = (d,)
        groups.setdefault(key, []).append(i)
    out = []
    for k, (key, idx) in enumerate(groups.items()):
        if granularity.kind == "week":
            expected = 7
        elif granularity.kind == "month":
            nxt = date(key[0] + key[1] // 12, key[1] % 12 + 1, 1)
            expected = (nxt - date(key[0], key[1], 1)).days
        else:
            expected = 1
        out.append(Window(k + 1, tuple(idx), len(idx) == expected))
    return out


@dataclass(frozen=True)
class Symbol:
    index: int
    weekday: str | None
    letter: str


@dataclass(frozen=True)
class SymbolicSeries:
    granularity: Granularity
    symbols: tuple[Symbol, ...]
    scheme: BinningScheme
    raw_band_edges: tuple[float, ...]
    windows: tuple[Window, ...] = ()

    @property
    def letters(self) -> str:
        return "".join(s.letter for s in self.symbols)

    def letter_at(self, index: int) -> str:
        for s in self.symbols:
            if s.index == index:
                return s.letter
        raise KeyError(index)


def scheme_space(series: TimeSeries, scheme: BinningScheme, fallback: bool = False):
    """Values in the space the scheme's breakpoints live in, plus (mean, sd).

    For SAX this is the z-normalized series.  A constant series either
    raises or, with `fallback`, maps every point to 0 (the middle letter).
    """
    x = series.array
    if scheme.mode == RAW:
        return x, 0.0, 1.0
    try:
        z = z_normalize(x)
    except DegenerateSeries:
        if not fallback:
            raise
        return np.zeros_like(x), float(x.mean()), 0.0
    return z, float(x.mean()), float(x.std(ddof=1))


def band_edges(scheme: BinningScheme, mean: float, sd: float) -> tuple[float, ...]:
    if scheme.mode == RAW:
        return scheme.breakpoints
    return tuple(mean + sd * b for b in scheme.breakpoints)


def symbolize(series: TimeSeries, granularity: Granularity, scheme: BinningScheme,
              calendar: bool = False, partial: bool = False, fallback: bool = False) -> SymbolicSeries:
    """Letters per (sub-)time window.

    ``Granularity("day", 1)`` yields one letter per logged day; coarser
    granularities bin the PAA mean of each window.  Incomplete windows are
    dropped unless `partial`.
    """
    values, mean, sd = scheme_space(series, scheme, fallback=fallback)
    windows = [w for w in partition(series.dates, granularity, calendar) if w.complete or partial]
    daily = granularity.kind == "day" and granularity.tw_len == 1
    symbols = []
    for w in windows:
        bin_ = int(scheme.bin_index([values[list(w.indices)].mean()])[0])
        weekday = WEEKDAYS[series.dates[w.indices[0]].weekday()] if daily else None
        symbols.append(Symbol(w.ordinal, weekday, scheme.letters[bin_]))
    return SymbolicSeries(granularity, tuple(symbols), scheme, band_edges(scheme, mean, sd), tuple(windows))
