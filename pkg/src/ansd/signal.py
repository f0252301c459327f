"""Core signal types: series, segments, peak sets and the non-self match rule.

All indices exposed by this module are 1-based, matching how locations are
reported everywhere else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np


class DataError(ValueError):
    """Input data violates a precondition (bad samples, bounds, too short)."""


class TimeSeries:
    """Immutable one-lead signal.

    Samples are stored as a read-only float64 array. NaN and infinite values
    are rejected at construction.
    """

    __slots__ = ("_samples", "sample_rate")

    def __init__(self, samples: Iterable[float], sample_rate: Optional[float] = None):
        arr = np.array(samples, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise DataError(f"TimeSeries must be one-dimensional, got shape {arr.shape}")
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise DataError(f"non-finite sample at index {int(bad[0]) + 1}")
        if sample_rate is not None and not sample_rate > 0:
            raise DataError(f"sample_rate must be positive, got {sample_rate}")
        arr.flags.writeable = False
        self._samples = arr
        self.sample_rate = sample_rate

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    def __len__(self) -> int:
        return self._samples.shape[0]

    def __iter__(self):
        return iter(self._samples.tolist())

    def __getitem__(self, item):
        return self._samples[item]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._samples
        return self._samples.astype(dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(
            self._samples, other._samples
        )

    def __hash__(self):
        return hash((self._samples.tobytes(), self.sample_rate))

    def __repr__(self) -> str:
        return f"TimeSeries(n={len(self)}, sample_rate={self.sample_rate})"


SeriesLike = Union[TimeSeries, Sequence[float], np.ndarray]


def as_array(x: SeriesLike) -> np.ndarray:
    """Return the samples of ``x`` as a finite 1-D float64 array."""
    if isinstance(x, TimeSeries):
        return x.samples
    return TimeSeries(x).samples


@dataclass(frozen=True)
class Segment:
    """Half-open range ``[start, start + length)`` in 1-based indexing."""

    start: int
    length: int

    def __post_init__(self):
        if self.start < 1:
            raise DataError(f"segment start must be >= 1, got {self.start}")
        if self.length < 1:
            raise DataError(f"segment length must be >= 1, got {self.length}")

    @property
    def stop(self) -> int:
        """Last index covered by the segment (inclusive, 1-based)."""
        return self.start + self.length - 1

    def check_bounds(self, n: int) -> None:
        if self.stop > n:
            raise DataError(
                f"segment [{self.start}, {self.stop}] exceeds series length {n}"
            )


@dataclass(frozen=True)
class PeakSet:
    locations: tuple
    series_length: Optional[int] = None

    def __post_init__(self):
        locs = tuple(int(v) for v in self.locations)
        object.__setattr__(self, "locations", locs)
        if locs and locs[0] < 1:
            raise DataError(f"peak location must be >= 1, got {locs[0]}")
        for a, b in zip(locs, locs[1:]):
            if b <= a:
                raise DataError(f"peak locations must be strictly increasing ({a}, {b})")
        if self.series_length is not None and locs and locs[-1] > self.series_length:
            raise DataError(
                f"peak location {locs[-1]} exceeds series length {self.series_length}"
            )

    def __len__(self) -> int:
        return len(self.locations)

    def __iter__(self):
        return iter(self.locations)


def is_non_self_match(p: int, q: int, m: int) -> bool:
    """True when windows of length ``m`` starting at ``p`` and ``q`` do not overlap."""
    if m < 1:
        raise ValueError(f"window length must be positive, got {m}")
    if p < 1 or q < 1:
        raise ValueError(f"start indices are 1-based, got p={p}, q={q}")
    return abs(p - q) >= m


def subsequence(t: SeriesLike, s: Segment) -> TimeSeries:
    """Samples of ``t`` covered by ``s``; out-of-range segments raise."""
    arr = as_array(t)
    s.check_bounds(arr.shape[0])
    rate = t.sample_rate if isinstance(t, TimeSeries) else None
    return TimeSeries(arr[s.start - 1 : s.stop], sample_rate=rate)
